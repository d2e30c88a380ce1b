#include "thermsense/bandpass.hpp"

#include "thermsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace thermsense {

namespace {

using cplx = std::complex<double>;

double biquad_step(const Biquad& s, std::array<double, 2>& z, double x) {
  const double y = s.b0 * x + z[0];
  z[0] = s.b1 * x - s.a1 * y + z[1];
  z[1] = s.b2 * x - s.a2 * y;
  return y;
}

// Runs the cascade over `x` in place, starting from zi scaled by x[0].
void run_cascade(const BandpassDesign& d, const std::vector<std::array<double, 2>>& zi,
                 std::vector<double>& x) {
  if (x.empty()) return;
  const double x0 = x.front();
  for (std::size_t k = 0; k < d.sections.size(); ++k) {
    std::array<double, 2> z = {zi[k][0] * x0, zi[k][1] * x0};
    for (double& v : x) v = biquad_step(d.sections[k], z, v);
  }
}

} // namespace

void check_spec(const BandpassSpec& spec, double fs) {
  if (!(fs > 0.0)) throw ParameterError("sampling rate must be positive");
  if (spec.order < 1 || spec.order > 8) throw ParameterError("filter order must be in [1, 8]");
  if (!(spec.low_hz > 0.0)) throw ParameterError("low cutoff must be positive");
  if (!(spec.low_hz < spec.high_hz)) throw ParameterError("low cutoff must be below high cutoff");
  if (!(spec.high_hz < fs / 2.0)) {
    throw ParameterError("high cutoff " + std::to_string(spec.high_hz) +
                         " Hz not below Nyquist " + std::to_string(fs / 2.0) + " Hz");
  }
}

BandpassDesign design_bandpass(const BandpassSpec& spec, double fs) {
  check_spec(spec, fs);
  const int n = spec.order;
  const double pi = std::numbers::pi;

  // prewarped analog edges
  const double c = 2.0 * fs;
  const double wl = c * std::tan(pi * spec.low_hz / fs);
  const double wh = c * std::tan(pi * spec.high_hz / fs);
  const double w0sq = wl * wh;
  double bw = wh - wl;
  if (spec.zero_phase) {
    // |H(edge)|^4 = 1/2  <=>  prototype frequency (sqrt(2) - 1)^(1/2n)
    bw /= std::pow(std::sqrt(2.0) - 1.0, 1.0 / (2.0 * n));
  }

  // lowpass prototype -> bandpass poles, then bilinear map
  std::vector<cplx> poles;
  poles.reserve(2 * n);
  cplx gain_den = 1.0;
  for (int k = 0; k < n; ++k) {
    const cplx p = std::polar(1.0, pi * (2.0 * k + n + 1) / (2.0 * n));
    const cplx a = p * (bw / 2.0);
    const cplx d = std::sqrt(a * a - w0sq);
    for (const cplx s : {a + d, a - d}) {
      poles.push_back((c + s) / (c - s));
      gain_den *= (c - s);
    }
  }
  // n analog zeros at s = 0 map to z = 1; the n at infinity map to z = -1
  const double gain = (std::pow(bw, n) * std::pow(c, n) / gain_den).real();

  // pair each upper-half-plane pole with its conjugate; real poles pair up
  std::vector<cplx> upper;
  std::vector<double> real;
  for (const cplx& p : poles) {
    if (std::abs(p.imag()) < 1e-12 * std::max(1.0, std::abs(p))) {
      real.push_back(p.real());
    } else if (p.imag() > 0.0) {
      upper.push_back(p);
    }
  }
  std::sort(real.begin(), real.end());

  BandpassDesign design;
  design.spec = spec;
  design.fs = fs;
  for (const cplx& p : upper) {
    design.sections.push_back({1.0, 0.0, -1.0, -2.0 * p.real(), std::norm(p)});
  }
  for (std::size_t i = 0; i + 1 < real.size(); i += 2) {
    design.sections.push_back(
        {1.0, 0.0, -1.0, -(real[i] + real[i + 1]), real[i] * real[i + 1]});
  }
  if (design.sections.size() != static_cast<std::size_t>(n)) {
    throw std::logic_error("bandpass pole pairing produced " +
                           std::to_string(design.sections.size()) + " sections for order " +
                           std::to_string(n));
  }
  auto& first = design.sections.front();
  first.b0 *= gain;
  first.b1 *= gain;
  first.b2 *= gain;
  return design;
}

std::complex<double> BandpassDesign::response(double f_hz) const {
  const cplx z1 = std::polar(1.0, -2.0 * std::numbers::pi * f_hz / fs);
  const cplx z2 = z1 * z1;
  cplx h = 1.0;
  for (const auto& s : sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

double BandpassDesign::applied_magnitude(double f_hz) const {
  const double m = std::abs(response(f_hz));
  return spec.zero_phase ? m * m : m;
}

double BandpassDesign::group_delay_s(double f_hz) const {
  const double df = 1e-4;
  const double p0 = std::arg(response(f_hz - df));
  const double p1 = std::arg(response(f_hz + df));
  double dphi = p1 - p0;
  while (dphi > std::numbers::pi) dphi -= 2.0 * std::numbers::pi;
  while (dphi < -std::numbers::pi) dphi += 2.0 * std::numbers::pi;
  return -dphi / (2.0 * std::numbers::pi * 2.0 * df);
}

std::vector<std::array<double, 2>> step_initial_state(const BandpassDesign& design) {
  std::vector<std::array<double, 2>> zi;
  double level = 1.0; // steady-state input level of the current section
  for (const auto& s : design.sections) {
    const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double y = dc * level;
    const double z1 = s.b2 * level - s.a2 * y;
    const double z0 = s.b1 * level - s.a1 * y + z1;
    zi.push_back({z0, z1});
    level = y;
  }
  return zi;
}

BreathingSignal bandpass(const BreathingSignal& sig, const BandpassSpec& spec) {
  if (!sig.is_uniform()) throw ParameterError("bandpass needs a uniformly sampled signal");
  const BandpassDesign design = design_bandpass(spec, sig.fs);
  const std::size_t n = sig.size();
  if (n < static_cast<std::size_t>(3 * spec.order)) {
    throw TooShortError("signal of " + std::to_string(n) + " samples shorter than 3x order " +
                        std::to_string(spec.order));
  }

  const double mean = std::accumulate(sig.values.begin(), sig.values.end(), 0.0) /
                      static_cast<double>(n);
  std::vector<double> x(sig.values);
  for (double& v : x) v -= mean;

  const auto zi = step_initial_state(design);
  BreathingSignal out;
  out.times = sig.times;
  out.stage = SignalStage::filtered;
  out.fs = sig.fs;

  if (!spec.zero_phase) {
    run_cascade(design, zi, x);
    out.values = std::move(x);
    return out;
  }

  const std::size_t pad =
      std::min<std::size_t>(3 * (2 * static_cast<std::size_t>(spec.order) + 1), n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x.back() - x[n - 1 - i]);

  run_cascade(design, zi, ext);
  std::reverse(ext.begin(), ext.end());
  run_cascade(design, zi, ext);
  std::reverse(ext.begin(), ext.end());

  out.values.assign(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                    ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
  return out;
}

CausalBandpass::CausalBandpass(const BandpassSpec& spec, double fs) {
  BandpassSpec single = spec;
  single.zero_phase = false;
  design_ = design_bandpass(single, fs);
  reset();
}

void CausalBandpass::reset() {
  state_.assign(design_.sections.size(), {0.0, 0.0});
  have_offset_ = false;
  offset_ = 0.0;
}

double CausalBandpass::push(double x) {
  if (!have_offset_) {
    have_offset_ = true;
    offset_ = x;
  }
  double v = x - offset_;
  for (std::size_t k = 0; k < design_.sections.size(); ++k) {
    v = biquad_step(design_.sections[k], state_[k], v);
  }
  return v;
}

} // namespace thermsense
