#include "thermsense/emissivity.hpp"

#include "thermsense/errors.hpp"

#include <cmath>
#include <string>

namespace thermsense {

namespace {

void check_emissivity(double emissivity) {
  if (!(emissivity > 0.0 && emissivity <= 1.0)) {
    throw ParameterError("emissivity " + std::to_string(emissivity) + " outside (0, 1]");
  }
}

} // namespace

double true_temperature(double apparent_kelvin, double emissivity) {
  check_emissivity(emissivity);
  if (emissivity == 1.0) return apparent_kelvin;
  return apparent_kelvin * std::pow(emissivity, -0.25);
}

ThermalFrame emissivity_correct(const ThermalFrame& frame, double emissivity) {
  check_emissivity(emissivity);
  if (emissivity == 1.0) return frame;
  const double gain = std::pow(emissivity, -0.25);
  std::vector<double> out(frame.pixels().begin(), frame.pixels().end());
  for (double& p : out) {
    if (is_valid(p)) p *= gain;
  }
  // the constructor re-applies the range check
  return ThermalFrame(frame.timestamp(), frame.width(), frame.height(), std::move(out));
}

ThermalSequence emissivity_correct(const ThermalSequence& seq) {
  ThermalSequence out;
  out.meta = seq.meta;
  out.meta.emissivity = 1.0;
  out.frames.reserve(seq.frames.size());
  for (const auto& f : seq.frames) out.frames.push_back(emissivity_correct(f, seq.meta.emissivity));
  return out;
}

} // namespace thermsense
