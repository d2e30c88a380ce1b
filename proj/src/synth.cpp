#include "thermsense/synth.hpp"

#include "thermsense/codec.hpp"
#include "thermsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace thermsense {

double RateProfile::bpm_at(double t, double duration) const noexcept {
  if (is_constant() || duration <= 0.0) return start_bpm;
  return start_bpm + (end_bpm - start_bpm) * (t / duration);
}

double RateProfile::phase_at(double t, double duration) const noexcept {
  const double k = 2.0 * std::numbers::pi / 60.0;
  if (is_constant() || duration <= 0.0) return k * start_bpm * t;
  return k * (start_bpm * t + (end_bpm - start_bpm) * t * t / (2.0 * duration));
}

void check_config(const SynthConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (!(cfg.duration_s > 0.0) || !std::isfinite(cfg.duration_s)) fail("duration must be positive");
  if (!(cfg.fps > 0.0 && cfg.fps <= 9.0)) fail("fps must be in (0, 9]");
  if (cfg.width <= 0 || cfg.height <= 0 || cfg.width > 0xFFFF || cfg.height > 0xFFFF) {
    fail("frame dimensions must be in [1, 65535]");
  }
  if (!(cfg.amplitude_k >= 0.0)) fail("amplitude must be non-negative");
  for (double bpm : {cfg.rate.start_bpm, cfg.rate.end_bpm}) {
    if (!(bpm > 0.0 && bpm <= 60.0)) fail("breathing rate must be in (0, 60] bpm");
  }
  if (!(cfg.noise_sd_k >= 0.0)) fail("noise_sd must be non-negative");
  if (!(cfg.jitter_sd_s >= 0.0)) fail("jitter_sd must be non-negative");
  if (!std::isfinite(cfg.drift_k_per_min)) fail("drift must be finite");
  if (!(cfg.emissivity > 0.0 && cfg.emissivity <= 1.0)) fail("emissivity must be in (0, 1]");
  if (!roi_fits(cfg.nostril_roi, cfg.width, cfg.height)) {
    fail("nostril ROI " + format_roi(cfg.nostril_roi) + " outside " + std::to_string(cfg.width) +
         "x" + std::to_string(cfg.height) + " frame");
  }
}

namespace {

double quantize_kelvin(double kelvin) {
  return std::floor(kelvin * 100.0 + 0.5) / 100.0;
}

} // namespace

SynthResult synthesize_sequence(const SynthConfig& cfg) {
  check_config(cfg);

  const auto frame_count = static_cast<std::size_t>(std::floor(cfg.duration_s * cfg.fps + 1e-9));
  const double period = 1.0 / cfg.fps;
  const Roi& roi = cfg.nostril_roi;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 1.0);

  SynthResult result;
  auto& seq = result.sequence;
  seq.meta.width = cfg.width;
  seq.meta.height = cfg.height;
  seq.meta.nominal_fps = static_cast<float>(cfg.fps);
  seq.meta.emissivity = cfg.emissivity;
  seq.meta.frame_count = frame_count;
  seq.frames.reserve(frame_count);

  const std::size_t cells = static_cast<std::size_t>(cfg.width) * cfg.height;
  for (std::size_t i = 0; i < frame_count; ++i) {
    double t = static_cast<double>(i) * period;
    if (i > 0 && cfg.jitter_sd_s > 0.0) {
      const double j = std::clamp(cfg.jitter_sd_s * jitter(rng), -0.4 * period, 0.4 * period);
      t += j;
    }
    t = static_cast<double>(to_timestamp_us(t)) / 1e6;

    const double phase = cfg.rate.phase_at(t, cfg.duration_s);
    const double nostril = cfg.baseline_k + cfg.drift_k_per_min * t / 60.0 +
                           cfg.amplitude_k * std::sin(phase);

    std::vector<double> pixels(cells);
    for (int y = 0; y < cfg.height; ++y) {
      const bool row_in = y >= roi.y && y < roi.y + roi.h;
      for (int x = 0; x < cfg.width; ++x) {
        const bool in = row_in && x >= roi.x && x < roi.x + roi.w;
        double v = in ? nostril : cfg.ambient_k;
        if (cfg.noise_sd_k > 0.0) v += cfg.noise_sd_k * noise(rng);
        pixels[static_cast<std::size_t>(y) * cfg.width + x] = quantize_kelvin(v);
      }
    }
    seq.frames.emplace_back(t, cfg.width, cfg.height, std::move(pixels));

    result.truth.t_s.push_back(t);
    result.truth.phase_rad.push_back(phase);
    result.truth.rate_bpm.push_back(cfg.rate.bpm_at(t, cfg.duration_s));
  }
  return result;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "t_s,phase_rad,rate_bpm\n";
  for (std::size_t i = 0; i < truth.t_s.size(); ++i) {
    out << truth.t_s[i] << ',' << truth.phase_rad[i] << ',' << truth.rate_bpm[i] << '\n';
  }
}

} // namespace thermsense
