#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace thermsense {

// Real-input forward DFT of fixed length n (FFTW backend). Input shorter than
// n is zero-padded. Returns the n/2 + 1 non-negative frequency bins,
//   X[k] = sum_j x[j] exp(-2 pi i j k / n).
// Instances are not shareable across threads; plan creation is serialized
// internally so separate instances may be used concurrently.
class RealFft {
public:
  explicit RealFft(std::size_t n);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::vector<std::complex<double>> forward(std::span<const double> input);

private:
  std::size_t n_;
  double* in_ = nullptr;
  void* out_ = nullptr;
  void* plan_ = nullptr;
};

std::size_t next_pow2(std::size_t n) noexcept;

// Symmetric Hann taper, w[i] = 0.5 - 0.5 cos(2 pi i / (n - 1)).
std::vector<double> hann(std::size_t n);

} // namespace thermsense
