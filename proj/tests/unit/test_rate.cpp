#include "../oracles.hpp"

#include "thermsense/errors.hpp"
#include "thermsense/rate.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace thermsense;

namespace {

BreathingSignal tone_mix(double seconds, double fs, std::vector<std::pair<double, double>> tones) {
  BreathingSignal s;
  s.stage = SignalStage::filtered;
  s.fs = fs;
  const auto n = static_cast<std::size_t>(std::llround(seconds * fs));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid_time(0.0, i, fs);
    double v = 0.0;
    for (auto [f, a] : tones) v += a * std::sin(2 * std::numbers::pi * f * t);
    s.times.push_back(t);
    s.values.push_back(v);
  }
  return s;
}

} // namespace

TEST_CASE("pure 0.25 Hz over 60 s reads 15 bpm in every window") {
  const auto rates = estimate_rate(tone_mix(60.0, 9.0, {{0.25, 1.0}}), RateParams{});
  const double bin_bpm = 60.0 * 9.0 / 4096.0;
  REQUIRE(rates.size() == 31);
  for (const auto& r : rates) CHECK(std::abs(r.bpm - 15.0) <= bin_bpm);
  CHECK(rates.front().t_center == doctest::Approx(0.5 * 269 / 9.0));
}

TEST_CASE("dominant tone wins over a weaker one") {
  // brute-force periodogram over a 30 s window: best bin 91 of 4096 -> 11.9970703125 bpm
  const auto s = tone_mix(30.0, 9.0, {{0.2, 1.0}, {0.5, 0.3}});
  const auto rates = estimate_rate(s, RateParams{});
  REQUIRE(rates.size() == 1);
  CHECK(rates[0].bpm == doctest::Approx(11.9970703125).epsilon(1e-12));
  CHECK(rates[0].confidence == doctest::Approx(0.040167483745784806).epsilon(1e-6));

  const auto xw = oracle::hann_mean_removed(s.values);
  double best = -1;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k <= 2048; ++k) {
    const double f = k * 9.0 / 4096.0;
    if (f < 0.1 || f > 0.85) continue;
    const double p = oracle::dft_power(xw, k, 4096);
    if (p > best) {
      best = p;
      best_k = k;
    }
  }
  CHECK(best_k == 91);
}

TEST_CASE("periodogram equals the direct DFT") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> x(100);
  for (double& v : x) v = n(rng);
  const auto p = periodogram(x, 256);
  const auto xw = oracle::hann_mean_removed(x);
  for (std::size_t k : {0u, 1u, 17u, 64u, 128u}) {
    CHECK(p[k] == doctest::Approx(oracle::dft_power(xw, k, 256)).epsilon(1e-9).scale(1e-9));
  }
}

TEST_CASE("29 s signal with a 30 s window is too short") {
  CHECK_THROWS_AS(estimate_rate(tone_mix(29.0, 9.0, {{0.25, 1.0}}), RateParams{}), TooShortError);
  CHECK_NOTHROW(estimate_rate(tone_mix(30.0, 9.0, {{0.25, 1.0}}), RateParams{}));
}

TEST_CASE("scaling the signal leaves every estimate unchanged") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> f(0.12, 0.8);
  std::uniform_real_distribution<double> a(0.1, 1.0);
  std::uniform_real_distribution<double> g(1e-3, 1e3);
  for (int iter = 0; iter < 20; ++iter) {
    const auto s = tone_mix(45.0, 9.0, {{f(rng), a(rng)}, {f(rng), a(rng)}, {f(rng), a(rng)}});
    const auto base = estimate_rate(s, RateParams{});
    const auto scaled_rates = estimate_rate(scaled(s, g(rng)), RateParams{});
    REQUIRE(base.size() == scaled_rates.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(base[i].bpm == scaled_rates[i].bpm);
  }
}

TEST_CASE("estimates stay in the band and confidence in (0, 1]") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0, 1);
  BreathingSignal s = tone_mix(40.0, 9.0, {});
  for (double& v : s.values) v = n(rng);
  for (const auto& r : estimate_rate(s, RateParams{})) {
    CHECK(r.bpm >= 6.0);
    CHECK(r.bpm <= 51.0);
    CHECK(r.confidence > 0.0);
    CHECK(r.confidence <= 1.0);
  }
}

TEST_CASE("window placement") {
  const auto plan = plan_windows(300, 9.0, 30.0, 1.0);
  CHECK(plan.length == 270);
  CHECK(plan.hop == 9);
  CHECK(plan.count == 4);
}
