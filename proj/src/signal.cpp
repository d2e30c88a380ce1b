#include "thermsense/signal.hpp"

#include "thermsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thermsense {

const char* to_string(SignalStage stage) noexcept {
  switch (stage) {
    case SignalStage::raw: return "raw";
    case SignalStage::uniform: return "uniform";
    case SignalStage::filtered: return "filtered";
  }
  return "raw";
}

void validate(const BreathingSignal& sig) {
  if (sig.times.size() != sig.values.size()) {
    throw InvariantError("signal has " + std::to_string(sig.times.size()) + " times but " +
                         std::to_string(sig.values.size()) + " values");
  }
  for (std::size_t i = 1; i < sig.times.size(); ++i) {
    if (!(sig.times[i] > sig.times[i - 1])) {
      throw InvariantError("signal times not strictly increasing at sample " + std::to_string(i),
                           i);
    }
  }
  if (sig.stage != SignalStage::raw) {
    if (!(sig.fs > 0.0)) throw InvariantError("uniform signal without a sampling rate");
    const double dt = 1.0 / sig.fs;
    for (std::size_t i = 1; i < sig.times.size(); ++i) {
      if (std::abs(sig.times[i] - sig.times[i - 1] - dt) > 1e-6) {
        throw InvariantError("uniform signal spacing off at sample " + std::to_string(i), i);
      }
    }
  }
}

UniformResampler::UniformResampler(double fs) : fs_(fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw ParameterError("resample rate must be positive");
  }
}

void UniformResampler::reset() {
  have_prev_ = false;
  next_k_ = 0;
}

std::vector<std::pair<double, double>> UniformResampler::push(double t, double value) {
  std::vector<std::pair<double, double>> out;
  if (!have_prev_) {
    have_prev_ = true;
    t0_ = prev_t_ = t;
    prev_v_ = value;
    next_k_ = 1;
    out.emplace_back(t, value);
    return out;
  }
  if (!(t > prev_t_)) throw InvariantError("resampler input time not increasing");
  for (;;) {
    const double tg = grid_time(t0_, next_k_, fs_);
    if (tg > t) break;
    out.emplace_back(tg, tg == t ? value : lerp_at(prev_t_, prev_v_, t, value, tg));
    ++next_k_;
  }
  prev_t_ = t;
  prev_v_ = value;
  return out;
}

BreathingSignal resample_uniform(const BreathingSignal& sig, double fs) {
  if (sig.size() < 2) throw TooShortError("resampling needs at least 2 samples");
  UniformResampler resampler(fs);
  BreathingSignal out;
  out.stage = SignalStage::uniform;
  out.fs = fs;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    for (const auto& [t, v] : resampler.push(sig.times[i], sig.values[i])) {
      out.times.push_back(t);
      out.values.push_back(v);
    }
  }
  return out;
}

BreathingSignal scaled(const BreathingSignal& sig, double gain) {
  BreathingSignal out = sig;
  for (double& v : out.values) v *= gain;
  return out;
}

BreathingSignal prefix(const BreathingSignal& sig, std::size_t n) {
  BreathingSignal out = sig;
  n = std::min(n, sig.size());
  out.times.resize(n);
  out.values.resize(n);
  return out;
}

} // namespace thermsense
