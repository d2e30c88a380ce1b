#include "thermsense/codec.hpp"
#include "thermsense/emissivity.hpp"
#include "thermsense/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace thermsense;

TEST_CASE("emissivity 1 is the identity") {
  ThermalFrame f(1.5, 3, 1, {250.0, kInvalid, 400.12});
  CHECK(emissivity_correct(f, 1.0) == f);
}

TEST_CASE("skin emissivity default") {
  CHECK(kSkinEmissivity == 0.98);
  CHECK(SequenceMeta{}.emissivity == 0.98);
  CHECK(SequenceMeta{}.width == 160);
  CHECK(SequenceMeta{}.height == 120);
  CHECK(SequenceMeta{}.nominal_fps <= 9.0);
}

TEST_CASE("300 K apparent at emissivity 0.98") {
  // 300 * 0.98^(-1/4), 40-digit evaluation
  const double expected = 301.5190358993922085450747063242752234374;
  ThermalFrame f(0.0, 2, 1, {300.0, kInvalid});
  const auto out = emissivity_correct(f, 0.98);
  CHECK(out.at(0, 0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK_FALSE(is_valid(out.at(1, 0)));
  CHECK(true_temperature(300.0, 0.98) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("corrected values leaving the range become invalid") {
  ThermalFrame f(0.0, 1, 1, {433.0});
  CHECK_FALSE(is_valid(emissivity_correct(f, 0.5).at(0, 0)));
}

TEST_CASE("emissivity parameter errors") {
  ThermalFrame f = ThermalFrame::uniform(0.0, 2, 2, 300.0);
  CHECK_THROWS_AS(emissivity_correct(f, 0.0), ParameterError);
  CHECK_THROWS_AS(emissivity_correct(f, -0.5), ParameterError);
  CHECK_THROWS_AS(emissivity_correct(f, 1.01), ParameterError);
}

TEST_CASE("correction is monotone and inverts within one centikelvin") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> temp(233.15, 420.0);
  std::uniform_real_distribution<double> emis(0.9, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double e = emis(rng);
    const double a = from_cell(to_cell(temp(rng)));
    const double b = from_cell(to_cell(temp(rng)));
    const double ta = true_temperature(a, e);
    const double tb = true_temperature(b, e);
    if (a < b) CHECK(ta < tb);
    // quantize the corrected value, undo the correction
    const double stored = from_cell(to_cell(ta));
    if (!is_valid(stored)) continue;
    CHECK(std::abs(stored * std::pow(e, 0.25) - a) <= 0.01);
  }
}

TEST_CASE("sequence correction marks the result as emissivity 1") {
  ThermalSequence seq;
  seq.meta.width = 2;
  seq.meta.height = 2;
  seq.frames.push_back(ThermalFrame::uniform(0.0, 2, 2, 300.0));
  seq.meta.frame_count = 1;
  const auto once = emissivity_correct(seq);
  CHECK(once.meta.emissivity == 1.0);
  CHECK(emissivity_correct(once) == once);
}
