#pragma once

#include "thermsense/thermal.hpp"

namespace thermsense {

// Converts an apparent (blackbody-equivalent) temperature to the true surface
// temperature of a grey body: T_true = T_app * emissivity^(-1/4), from the
// total-band Stefan-Boltzmann relation. The 8-14 um band of the sensor is not
// modelled.
double true_temperature(double apparent_kelvin, double emissivity);

// Applies true_temperature() to every valid pixel. Invalid pixels pass
// through; results that leave the valid range become invalid.
// Throws ParameterError unless 0 < emissivity <= 1.
ThermalFrame emissivity_correct(const ThermalFrame& frame, double emissivity);

// Corrects every frame with meta.emissivity. The result carries emissivity 1
// so that correcting twice is a no-op.
ThermalSequence emissivity_correct(const ThermalSequence& seq);

} // namespace thermsense
