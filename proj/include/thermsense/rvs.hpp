#pragma once

#include "thermsense/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace thermsense {

// Respiration variability spectrogram: a short-time magnitude spectrum of the
// breathing signal cropped to the breathing band and scaled into [0, 1], so
// that it can be consumed as a grayscale image.

enum class RvsScale { magnitude, log_magnitude };

struct RvsParams {
  double win_s = 20.0;
  double hop_s = 1.0;
  std::size_t pad_to = 2048;
  double f_lo = 0.05;
  double f_hi = 1.0;
  RvsScale scale = RvsScale::magnitude;
};

// Throws ParameterError unless win_s > 0, hop_s > 0, 0 <= f_lo < f_hi <= fs/2.
void check_params(const RvsParams& params, double fs);

// Frequency axis of a column: bins k * fs / nfft inside [f_lo, f_hi].
struct RvsAxis {
  std::size_t nfft = 0;
  std::size_t first_bin = 0;
  std::vector<double> freqs_hz;
};

RvsAxis rvs_axis(const RvsParams& params, double fs, std::size_t window_length);

// Unnormalized column: |FFT| of the mean-removed, Hann-tapered window
// (log10 of it for log_magnitude), restricted to the axis bins.
std::vector<double> rvs_column(std::span<const double> window, const RvsAxis& axis,
                               RvsScale scale);

struct Rvs {
  // row-major, n_freq rows x n_time columns; row 0 is the lowest frequency
  std::vector<double> magnitudes;
  std::vector<double> freqs_hz;
  std::vector<double> times_s;
  RvsParams params;

  std::size_t n_freq() const noexcept { return freqs_hz.size(); }
  std::size_t n_time() const noexcept { return times_s.size(); }
  double at(std::size_t f, std::size_t t) const { return magnitudes[f * n_time() + t]; }
  double& at(std::size_t f, std::size_t t) { return magnitudes[f * n_time() + t]; }
  std::vector<double> column(std::size_t t) const;
};

// Spectrogram before normalization.
Rvs compute_rvs_raw(const BreathingSignal& sig, const RvsParams& params);

// Global min-max normalization to [0, 1]; an all-equal matrix becomes zeros.
void normalize_global(Rvs& rvs);

// compute_rvs_raw() followed by normalize_global(). Throws TooShortError when
// the signal is shorter than one window.
Rvs compute_rvs(const BreathingSignal& sig, const RvsParams& params);

struct RvsColumn {
  double t_s = 0.0;
  std::vector<double> raw;        // as in compute_rvs_raw
  std::vector<double> normalized; // scaled by the running extrema at emission
};

// Incremental spectrogram. Columns are emitted as soon as their window is
// complete; the raw columns equal those of compute_rvs_raw() on the
// concatenated input. Normalization uses the running maximum of everything
// emitted so far (running min-max on the log scale), so early columns are
// not rescaled when a stronger one arrives.
class RvsStream {
public:
  RvsStream(const RvsParams& params, double fs);

  // Throws ParameterError when chunk.fs differs from the stream's rate or the
  // chunk does not continue the uniform time grid.
  std::vector<RvsColumn> push(const BreathingSignal& chunk);
  std::vector<RvsColumn> push(double t, double value);

  const RvsAxis& axis() const noexcept { return axis_; }
  const RvsParams& params() const noexcept { return params_; }
  double fs() const noexcept { return fs_; }
  std::size_t columns_emitted() const noexcept { return emitted_; }
  void reset();

private:
  std::vector<RvsColumn> drain();

  RvsParams params_;
  double fs_;
  std::size_t length_;
  std::size_t hop_;
  RvsAxis axis_;
  std::vector<double> buffer_; // samples from the next window start on
  std::vector<double> buffer_times_;
  std::size_t emitted_ = 0;
  std::size_t skip_ = 0;
  bool have_last_ = false;
  double last_t_ = 0.0;
  bool have_extrema_ = false;
  double run_min_ = 0.0;
  double run_max_ = 0.0;
};

// Binary PGM (P5, maxval 255): pixel = round_half_up(255 * magnitude), row 0
// is the highest frequency, time runs left to right. Throws InvariantError on
// an empty matrix.
std::vector<std::uint8_t> rvs_to_pgm(const Rvs& rvs);

std::uint8_t to_gray(double magnitude) noexcept;

void write_pgm(const std::filesystem::path& path, const Rvs& rvs);

// CSV: first row "f_hz\t_s" then the column times, each following row a bin
// frequency and its magnitudes (low to high frequency).
void write_rvs_csv(const std::filesystem::path& path, const Rvs& rvs);

} // namespace thermsense
