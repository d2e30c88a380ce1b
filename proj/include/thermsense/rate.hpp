#pragma once

#include "thermsense/bandpass.hpp"
#include "thermsense/signal.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace thermsense {

struct RateEstimate {
  double t_center = 0.0;
  double bpm = 0.0;
  double confidence = 0.0; // peak bin power / total in-band power

  bool operator==(const RateEstimate&) const = default;
};

struct RateParams {
  double window_s = 30.0;
  double hop_s = 1.0;
  double low_hz = 0.1;
  double high_hz = 0.85;
  std::size_t min_fft = 4096;

  static RateParams from_band(const BandpassSpec& band, double window_s = 30.0,
                              double hop_s = 1.0) {
    RateParams p;
    p.window_s = window_s;
    p.hop_s = hop_s;
    p.low_hz = band.low_hz;
    p.high_hz = band.high_hz;
    return p;
  }
};

// Window placement on a uniform signal: window k covers samples
// [k * hop, k * hop + length).
struct WindowPlan {
  std::size_t length = 0;
  std::size_t hop = 0;
  std::size_t count = 0;
};

// length = round(window_s * fs), hop = max(1, round(hop_s * fs)).
// Throws TooShortError when n_samples < length.
WindowPlan plan_windows(std::size_t n_samples, double fs, double window_s, double hop_s);

// Hann-tapered, mean-removed periodogram |X_k|^2 of `window`, zero-padded to
// `nfft`; bins k = 0 .. nfft/2 at k * fs / nfft.
std::vector<double> periodogram(std::span<const double> window, std::size_t nfft);

// Rate of one window: argmax of the periodogram over bins inside
// [low_hz, high_hz], lowest frequency on ties.
RateEstimate estimate_window(std::span<const double> window, double fs, double t_center,
                             const RateParams& params);

// Sliding-window breathing rate. nfft = max(min_fft, next_pow2(length)).
// Throws TooShortError when the signal is shorter than one window and
// ParameterError for a non-uniform signal or bad parameters.
std::vector<RateEstimate> estimate_rate(const BreathingSignal& sig, const RateParams& params);

} // namespace thermsense
