#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace thermsense {

enum class SignalStage { raw, uniform, filtered };

const char* to_string(SignalStage stage) noexcept;

// 1-D breathing series in voxel-volume units. `fs` is meaningful only for
// uniformly sampled stages (uniform, filtered) and is 0 for raw.
struct BreathingSignal {
  std::vector<double> times;
  std::vector<double> values;
  SignalStage stage = SignalStage::raw;
  double fs = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }
  bool is_uniform() const noexcept { return stage != SignalStage::raw && fs > 0.0; }
};

// Throws InvariantError if lengths differ, times are not strictly increasing,
// or a uniform signal's spacing deviates from 1/fs by more than 1 us.
void validate(const BreathingSignal& sig);

// Grid point k of a uniform grid anchored at t0.
inline double grid_time(double t0, std::size_t k, double fs) noexcept {
  return t0 + static_cast<double>(k) / fs;
}

// Linear interpolation of (t_a, v_a)-(t_b, v_b) at t, t_a < t_b.
inline double lerp_at(double t_a, double v_a, double t_b, double v_b, double t) noexcept {
  const double u = (t - t_a) / (t_b - t_a);
  return v_a + u * (v_b - v_a);
}

// Linearly interpolates onto t0, t0 + 1/fs, ... up to and including the last
// grid point <= t_end. No extrapolation. Throws TooShortError for fewer than
// 2 samples and ParameterError for fs <= 0.
BreathingSignal resample_uniform(const BreathingSignal& sig, double fs);

// Streaming form of resample_uniform(): feeding the samples of `sig` one by
// one yields exactly the samples of resample_uniform(sig, fs).
class UniformResampler {
public:
  explicit UniformResampler(double fs);

  // Returns the grid samples that became computable with this input.
  // Throws InvariantError if t does not increase.
  std::vector<std::pair<double, double>> push(double t, double value);

  double fs() const noexcept { return fs_; }
  void reset();

private:
  double fs_;
  bool have_prev_ = false;
  double t0_ = 0.0;
  double prev_t_ = 0.0;
  double prev_v_ = 0.0;
  std::size_t next_k_ = 0;
};

// Copy with every value multiplied by `gain`.
BreathingSignal scaled(const BreathingSignal& sig, double gain);

// Keeps the first n samples.
BreathingSignal prefix(const BreathingSignal& sig, std::size_t n);

} // namespace thermsense
