#include "../oracles.hpp"

#include "thermsense/bandpass.hpp"
#include "thermsense/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace thermsense;

namespace {

BreathingSignal uniform_signal(std::vector<double> v, double fs) {
  BreathingSignal s;
  s.stage = SignalStage::uniform;
  s.fs = fs;
  for (std::size_t i = 0; i < v.size(); ++i) s.times.push_back(grid_time(0.0, i, fs));
  s.values = std::move(v);
  return s;
}

std::vector<double> apply(const std::vector<double>& x, const BandpassSpec& spec, double fs) {
  return bandpass(uniform_signal(x, fs), spec).values;
}

} // namespace

TEST_CASE("design matches an independent zpk design") {
  // scipy: buttap(2) -> lp2bp_zpk(w0, widened bw) -> bilinear_zpk(fs=9),
  // evaluated with sosfreqz; |H|^2 at each frequency.
  const auto d = design_bandpass(BandpassSpec{}, 9.0);
  REQUIRE(d.sections.size() == 2);
  CHECK(d.applied_magnitude(0.15) == doctest::Approx(0.9611992590832477).epsilon(1e-9));
  CHECK(d.applied_magnitude(0.3) == doctest::Approx(0.9999999881020885).epsilon(1e-9));
  CHECK(d.applied_magnitude(0.8) == doctest::Approx(0.7701229684322759).epsilon(1e-9));
  CHECK(d.applied_magnitude(1.7) == doctest::Approx(0.06453051943873049).epsilon(1e-9));
  CHECK(d.applied_magnitude(2.0) == doctest::Approx(0.027089191632995807).epsilon(1e-9));
  CHECK(d.applied_magnitude(0.0) < 1e-12);
}

TEST_CASE("single-pass design matches butter(2, [0.1, 0.85], bandpass, fs=9)") {
  BandpassSpec spec;
  spec.zero_phase = false;
  const auto d = design_bandpass(spec, 9.0);
  // scipy sos rows: [0.0495, 0.0990, 0.0495 | 1, -1.3043, 0.5239],
  //                 [1, -2, 1 | 1, -1.9060, 0.9116]
  std::vector<std::pair<double, double>> dens;
  for (const auto& s : d.sections) dens.emplace_back(s.a1, s.a2);
  std::sort(dens.begin(), dens.end());
  CHECK(dens[0].first == doctest::Approx(-1.90601431).epsilon(1e-8));
  CHECK(dens[0].second == doctest::Approx(0.91161949).epsilon(1e-8));
  CHECK(dens[1].first == doctest::Approx(-1.30432886).epsilon(1e-8));
  CHECK(dens[1].second == doctest::Approx(0.5238943).epsilon(1e-7));
  CHECK(std::abs(d.response(0.1)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(std::abs(d.response(0.85)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("zero-phase output matches sosfiltfilt on a fixed input") {
  // x = sin(0.3 i) + 0.5 cos(1.1 i) + 0.01 i, n = 100, mean removed,
  // scipy.signal.sosfiltfilt with default odd padding (padlen 15).
  std::vector<double> x(100);
  for (int i = 0; i < 100; ++i) x[i] = std::sin(0.3 * i) + 0.5 * std::cos(1.1 * i) + 0.01 * i;
  const auto y = apply(x, BandpassSpec{}, 9.0);
  REQUIRE(y.size() == 100);
  CHECK(y[0] == doctest::Approx(-0.2807219101285797).epsilon(1e-9));
  CHECK(y[10] == doctest::Approx(-0.26120592542726345).epsilon(1e-9));
  CHECK(y[50] == doctest::Approx(0.5100493508006008).epsilon(1e-9));
  CHECK(y[99] == doctest::Approx(0.25404213693691524).epsilon(1e-9));
}

TEST_CASE("constant input filters to zero") {
  const auto y = apply(std::vector<double>(200, 12345.0), BandpassSpec{}, 9.0);
  for (double v : y) CHECK(std::abs(v) < 1e-6 * 12345.0);
}

TEST_CASE("steady-state amplitude at 0.3 Hz and 2.0 Hz") {
  auto filt = [](const std::vector<double>& x) { return apply(x, BandpassSpec{}, 9.0); };
  const double pass = oracle::measured_gain(filt, 0.3, 9.0);
  CHECK(pass >= 0.9);
  CHECK(pass <= 1.0 + 1e-6);
  CHECK(oracle::measured_gain(filt, 2.0, 9.0) < 0.1);
}

TEST_CASE("phase is zero in the passband") {
  const double fs = 9.0;
  std::vector<double> x(3600);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2 * std::numbers::pi * 0.3 * i / fs);
  const auto y = apply(x, BandpassSpec{}, fs);
  // peaks line up with the input: correlation with the input ~ |H|^2
  double xy = 0, xx = 0;
  for (std::size_t i = 900; i < 2700; ++i) {
    xy += x[i] * y[i];
    xx += x[i] * x[i];
  }
  CHECK(xy / xx == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("bandpass parameter errors") {
  const auto s = uniform_signal(std::vector<double>(100, 0.0), 9.0);
  BandpassSpec spec;
  spec.high_hz = 4.5;
  CHECK_THROWS_AS(bandpass(s, spec), ParameterError);
  spec = BandpassSpec{};
  spec.low_hz = 0.9;
  CHECK_THROWS_AS(bandpass(s, spec), ParameterError);
  spec = BandpassSpec{};
  CHECK_THROWS_AS(bandpass(uniform_signal(std::vector<double>(5, 0.0), 9.0), spec), TooShortError);
  CHECK_NOTHROW(bandpass(uniform_signal(std::vector<double>(6, 0.0), 9.0), spec));
  BreathingSignal raw;
  raw.times = {0, 1, 2};
  raw.values = {0, 0, 0};
  CHECK_THROWS_AS(bandpass(raw, spec), ParameterError);
}

TEST_CASE("causal filter passes the band and reports its delay") {
  CausalBandpass f(BandpassSpec{}, 9.0);
  auto run = [&](const std::vector<double>& x) {
    f.reset();
    std::vector<double> y;
    for (double v : x) y.push_back(f.push(v));
    return y;
  };
  CHECK(oracle::measured_gain(run, 0.3, 9.0) == doctest::Approx(std::abs(f.design().response(0.3))).epsilon(1e-3));
  CHECK(f.design().group_delay_s(0.3) > 0.0);
}
