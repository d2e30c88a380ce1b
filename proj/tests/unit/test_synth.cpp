#include "thermsense/codec.hpp"
#include "thermsense/errors.hpp"
#include "thermsense/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace thermsense;

namespace {

std::vector<double> pixel_series(const ThermalSequence& seq, int x, int y) {
  std::vector<double> v;
  for (const auto& f : seq.frames) v.push_back(f.at(x, y));
  return v;
}

} // namespace

TEST_CASE("frame count is floor(duration * fps)") {
  SynthConfig cfg;
  cfg.duration_s = 60.0;
  cfg.fps = 9.0;
  CHECK(synthesize_sequence(cfg).sequence.frames.size() == 540);
  cfg.duration_s = 10.05;
  CHECK(synthesize_sequence(cfg).sequence.frames.size() == 90);
}

TEST_CASE("zero amplitude and noise leave baseline plus drift") {
  SynthConfig cfg;
  cfg.amplitude_k = 0.0;
  cfg.noise_sd_k = 0.0;
  cfg.drift_k_per_min = 0.6;
  cfg.duration_s = 5.0;
  const auto r = synthesize_sequence(cfg);
  const Roi& roi = cfg.nostril_roi;
  for (const auto& f : r.sequence.frames) {
    const double expected = std::floor((cfg.baseline_k + 0.6 * f.timestamp() / 60.0) * 100 + 0.5) / 100;
    for (int y = roi.y; y < roi.y + roi.h; ++y) {
      for (int x = roi.x; x < roi.x + roi.w; ++x) REQUIRE(f.at(x, y) == expected);
    }
    CHECK(f.at(0, 0) == cfg.ambient_k);
  }
}

TEST_CASE("constant 15 bpm noise-free nostril pixel is a 0.25 Hz sinusoid") {
  SynthConfig cfg;
  cfg.rate = RateProfile::constant(15.0);
  cfg.duration_s = 20.0;
  const auto r = synthesize_sequence(cfg);
  const auto v = pixel_series(r.sequence, cfg.nostril_roi.x + 1, cfg.nostril_roi.y + 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = r.sequence.frames[i].timestamp();
    const double ideal = cfg.baseline_k + cfg.amplitude_k * std::sin(2 * std::numbers::pi * 0.25 * t);
    REQUIRE(std::abs(v[i] - ideal) <= 0.005 + 1e-9);
    REQUIRE(r.truth.rate_bpm[i] == 15.0);
  }
}

TEST_CASE("chirp ground truth") {
  SynthConfig cfg;
  cfg.rate = RateProfile::chirp(12.0, 24.0);
  cfg.duration_s = 60.0;
  const auto r = synthesize_sequence(cfg);
  CHECK(r.truth.rate_bpm.front() == 12.0);
  CHECK(r.truth.rate_bpm.back() == doctest::Approx(12.0 + 12.0 * r.truth.t_s.back() / 60.0));
  // phase derivative matches the rate
  for (std::size_t i = 1; i < r.truth.t_s.size(); ++i) {
    const double dt = r.truth.t_s[i] - r.truth.t_s[i - 1];
    const double mid_rate = 0.5 * (r.truth.rate_bpm[i] + r.truth.rate_bpm[i - 1]);
    CHECK((r.truth.phase_rad[i] - r.truth.phase_rad[i - 1]) / dt ==
          doctest::Approx(2 * std::numbers::pi * mid_rate / 60.0).epsilon(1e-9));
  }
}

TEST_CASE("same seed gives byte-identical encodings") {
  SynthConfig cfg;
  cfg.noise_sd_k = 0.05;
  cfg.jitter_sd_s = 0.02;
  cfg.duration_s = 10.0;
  cfg.seed = 7;
  const auto a = encode_sequence(synthesize_sequence(cfg).sequence);
  const auto b = encode_sequence(synthesize_sequence(cfg).sequence);
  CHECK(a == b);
  cfg.seed = 8;
  CHECK(encode_sequence(synthesize_sequence(cfg).sequence) != a);
}

TEST_CASE("jittered timestamps stay strictly increasing and round-trip") {
  SynthConfig cfg;
  cfg.jitter_sd_s = 0.2; // heavier than the truncation bound
  cfg.duration_s = 30.0;
  const auto seq = synthesize_sequence(cfg).sequence;
  CHECK(seq.frames.front().timestamp() == 0.0);
  CHECK_NOTHROW(validate(seq));
  CHECK(decode_sequence(encode_sequence(seq)) == seq);
}

TEST_CASE("synth parameter errors") {
  SynthConfig cfg;
  cfg.nostril_roi = {150, 0, 20, 4};
  CHECK_THROWS_AS(synthesize_sequence(cfg), ParameterError);
  cfg = SynthConfig{};
  cfg.rate = RateProfile::constant(0.0);
  CHECK_THROWS_AS(synthesize_sequence(cfg), ParameterError);
  cfg.rate = RateProfile::constant(61.0);
  CHECK_THROWS_AS(synthesize_sequence(cfg), ParameterError);
  cfg = SynthConfig{};
  cfg.fps = 12.0;
  CHECK_THROWS_AS(synthesize_sequence(cfg), ParameterError);
  cfg = SynthConfig{};
  cfg.amplitude_k = -0.1;
  CHECK_THROWS_AS(synthesize_sequence(cfg), ParameterError);
}
