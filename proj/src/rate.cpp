#include "thermsense/rate.hpp"

#include "thermsense/errors.hpp"
#include "thermsense/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace thermsense {

WindowPlan plan_windows(std::size_t n_samples, double fs, double window_s, double hop_s) {
  if (!(fs > 0.0)) throw ParameterError("sampling rate must be positive");
  if (!(window_s > 0.0) || !(hop_s > 0.0)) {
    throw ParameterError("window and hop must be positive");
  }
  WindowPlan plan;
  plan.length = static_cast<std::size_t>(std::llround(window_s * fs));
  plan.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hop_s * fs)));
  if (plan.length < 2) throw ParameterError("window shorter than 2 samples");
  if (n_samples < plan.length) {
    throw TooShortError("signal of " + std::to_string(n_samples) + " samples (" +
                        std::to_string(static_cast<double>(n_samples) / fs) +
                        " s) shorter than the " + std::to_string(window_s) + " s window");
  }
  plan.count = (n_samples - plan.length) / plan.hop + 1;
  return plan;
}

std::vector<double> periodogram(std::span<const double> window, std::size_t nfft) {
  const std::size_t n = window.size();
  const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(n);
  const auto taper = hann(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (window[i] - mean) * taper[i];
  RealFft fft(nfft);
  const auto bins = fft.forward(x);
  std::vector<double> power(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) power[k] = std::norm(bins[k]);
  return power;
}

RateEstimate estimate_window(std::span<const double> window, double fs, double t_center,
                             const RateParams& params) {
  const std::size_t nfft = std::max(params.min_fft, next_pow2(window.size()));
  const auto power = periodogram(window, nfft);
  const double df = fs / static_cast<double>(nfft);

  std::size_t best = 0;
  double best_power = -1.0;
  double total = 0.0;
  std::size_t in_band = 0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < params.low_hz || f > params.high_hz) continue;
    ++in_band;
    total += power[k];
    if (power[k] > best_power) {
      best_power = power[k];
      best = k;
    }
  }
  if (in_band == 0) throw ParameterError("no periodogram bin inside the rate band");

  RateEstimate est;
  est.t_center = t_center;
  est.bpm = 60.0 * static_cast<double>(best) * df;
  // a flat zero spectrum has no peak: report the uniform share
  est.confidence = total > 0.0 ? best_power / total : 1.0 / static_cast<double>(in_band);
  return est;
}

std::vector<RateEstimate> estimate_rate(const BreathingSignal& sig, const RateParams& params) {
  if (!sig.is_uniform()) throw ParameterError("rate estimation needs a uniformly sampled signal");
  if (!(params.low_hz > 0.0 && params.low_hz < params.high_hz && params.high_hz <= sig.fs / 2.0)) {
    throw ParameterError("rate band must satisfy 0 < low < high <= fs/2");
  }
  const WindowPlan plan = plan_windows(sig.size(), sig.fs, params.window_s, params.hop_s);
  std::vector<RateEstimate> out;
  out.reserve(plan.count);
  const std::span<const double> values(sig.values);
  for (std::size_t w = 0; w < plan.count; ++w) {
    const std::size_t start = w * plan.hop;
    const double t_center = 0.5 * (sig.times[start] + sig.times[start + plan.length - 1]);
    out.push_back(estimate_window(values.subspan(start, plan.length), sig.fs, t_center, params));
  }
  return out;
}

} // namespace thermsense
