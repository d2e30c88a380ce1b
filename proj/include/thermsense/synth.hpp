#pragma once

#include "thermsense/roi.hpp"
#include "thermsense/thermal.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace thermsense {

// Breathing rate over time: constant, or a linear chirp from start_bpm at
// t=0 to end_bpm at t=duration.
struct RateProfile {
  double start_bpm = 15.0;
  double end_bpm = 15.0;

  static RateProfile constant(double bpm) { return {bpm, bpm}; }
  static RateProfile chirp(double from_bpm, double to_bpm) { return {from_bpm, to_bpm}; }

  bool is_constant() const noexcept { return start_bpm == end_bpm; }
  double bpm_at(double t, double duration) const noexcept;
  // Integral of 2*pi*bpm(t)/60 from 0 to t.
  double phase_at(double t, double duration) const noexcept;
};

struct SynthConfig {
  double duration_s = 60.0;
  double fps = 9.0;
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  RateProfile rate;
  double amplitude_k = 0.3;
  double baseline_k = 307.15;
  double ambient_k = 295.15;
  double noise_sd_k = 0.0;
  double drift_k_per_min = 0.0;
  Roi nostril_roi{72, 70, 16, 8};
  double jitter_sd_s = 0.0;
  double emissivity = kSkinEmissivity;
  std::uint64_t seed = 0;
};

// Exact phase and instantaneous rate at each synthesized frame.
struct GroundTruth {
  std::vector<double> t_s;
  std::vector<double> phase_rad;
  std::vector<double> rate_bpm;
};

struct SynthResult {
  ThermalSequence sequence;
  GroundTruth truth;
};

// Throws ParameterError on invalid configuration (non-positive amplitude,
// rate outside (0, 60] bpm, fps outside (0, 9], ROI outside the frame...).
void check_config(const SynthConfig& cfg);

// Renders floor(duration * fps) frames. Nostril pixels carry
//   baseline + drift * t + amplitude * sin(phase(t)) + noise,
// all others ambient + noise. Frame i is timestamped i / fps plus Gaussian
// jitter truncated to +-0.4 frame periods (frame 0 stays at t=0). Pixels are
// quantized to the centikelvin lattice and timestamps to microseconds, so the
// result round-trips through .tseq exactly. Deterministic for a given cfg.
SynthResult synthesize_sequence(const SynthConfig& cfg);

// CSV with header t_s,phase_rad,rate_bpm.
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth);

} // namespace thermsense
