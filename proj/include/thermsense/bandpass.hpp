#pragma once

#include "thermsense/signal.hpp"

#include <array>
#include <complex>
#include <vector>

namespace thermsense {

// Breathing passband. Defaults cover 6-51 breaths per minute and keep the
// cardiac band out.
struct BandpassSpec {
  double low_hz = 0.1;
  double high_hz = 0.85;
  int order = 2;           // Butterworth order per pass
  bool zero_phase = true;  // forward-backward application
};

// Throws ParameterError unless 0 < low < high < fs/2 and order >= 1.
void check_spec(const BandpassSpec& spec, double fs);

// Second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;
};

// Digital Butterworth bandpass as a cascade of biquads (bilinear transform
// with prewarping). With zero_phase set the analog bandwidth is widened so
// that the forward-backward response, which is the squared single-pass
// magnitude, still crosses -3 dB at low_hz and high_hz.
struct BandpassDesign {
  BandpassSpec spec;
  double fs = 0.0;
  std::vector<Biquad> sections;

  // Single-pass complex response at f Hz.
  std::complex<double> response(double f_hz) const;
  // Magnitude of the filter as applied: |H|^2 for zero-phase, |H| otherwise.
  double applied_magnitude(double f_hz) const;
  // Single-pass group delay in seconds (numerical phase derivative).
  double group_delay_s(double f_hz) const;
};

BandpassDesign design_bandpass(const BandpassSpec& spec, double fs);

// Steady-state section states for a unit step input (scipy's sosfilt_zi).
std::vector<std::array<double, 2>> step_initial_state(const BandpassDesign& design);

// Mean-removed bandpass of a uniform signal. Zero-phase mode pads both ends
// with an odd reflection of min(3 (2 order + 1), n - 1) samples, runs the
// cascade forward and backward from step-matched initial states, and trims.
// Output length equals input length. Throws ParameterError for an invalid
// spec or non-uniform input and TooShortError for fewer than 3 * order
// samples.
BreathingSignal bandpass(const BreathingSignal& sig, const BandpassSpec& spec);

// Sample-at-a-time single-pass filter for live use. The first input sample is
// taken as the signal offset and subtracted from all inputs; output lags the
// input by the design's group delay.
class CausalBandpass {
public:
  CausalBandpass(const BandpassSpec& spec, double fs);

  double push(double x);
  void reset();
  const BandpassDesign& design() const noexcept { return design_; }

private:
  BandpassDesign design_;
  std::vector<std::array<double, 2>> state_;
  bool have_offset_ = false;
  double offset_ = 0.0;
};

} // namespace thermsense
