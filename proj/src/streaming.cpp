#include "thermsense/pipeline.hpp"

#include "thermsense/emissivity.hpp"
#include "thermsense/errors.hpp"

#include <cmath>

namespace thermsense {

void check_params(const PipelineParams& params) {
  check_params(params.voxel);
  if (!(params.resample_fs > 0.0)) throw ParameterError("resample rate must be positive");
  check_spec(params.band, params.resample_fs);
  check_params(params.rvs, params.resample_fs);
  if (!(params.rate_window_s > 0.0) || !(params.rate_hop_s > 0.0)) {
    throw ParameterError("rate window and hop must be positive");
  }
}

PipelineResult process_signal(const BreathingSignal& raw, const PipelineParams& params) {
  check_params(params);
  PipelineResult r;
  r.raw = raw;
  r.uniform = resample_uniform(raw, params.resample_fs);
  r.filtered = bandpass(r.uniform, params.band);
  r.rates = estimate_rate(r.filtered, params.rate_params());
  r.rvs = compute_rvs(r.filtered, params.rvs);
  return r;
}

PipelineResult process_sequence(const ThermalSequence& seq, const Roi& roi,
                                const PipelineParams& params) {
  check_params(params);
  const ThermalSequence corrected = emissivity_correct(seq);
  return process_signal(integrate_sequence(corrected, roi, params.voxel), params);
}

RateEstimate rate_of_last_window(const BreathingSignal& uniform, const PipelineParams& params) {
  const BreathingSignal filtered = bandpass(uniform, params.band);
  const auto rp = params.rate_params();
  const WindowPlan plan = plan_windows(filtered.size(), filtered.fs, rp.window_s, rp.hop_s);
  const std::size_t start = (plan.count - 1) * plan.hop;
  const double t_center =
      0.5 * (filtered.times[start] + filtered.times[start + plan.length - 1]);
  return estimate_window(std::span<const double>(filtered.values).subspan(start, plan.length),
                         filtered.fs, t_center, rp);
}

namespace {

WindowPlan rate_plan(const PipelineParams& params) {
  WindowPlan plan;
  plan.length = static_cast<std::size_t>(std::llround(params.rate_window_s * params.resample_fs));
  plan.hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(params.rate_hop_s * params.resample_fs)));
  return plan;
}

} // namespace

StreamingEstimator::StreamingEstimator(const Roi& roi, const PipelineParams& params,
                                       double emissivity)
    : params_((check_params(params), params)), emissivity_(emissivity),
      integrator_(roi, params.voxel), resampler_(params.resample_fs),
      rate_plan_(rate_plan(params)), live_filter_(params.band, params.resample_fs),
      rvs_(params.rvs, params.resample_fs) {
  if (!(emissivity > 0.0 && emissivity <= 1.0)) throw ParameterError("emissivity outside (0, 1]");
  reset();
}

void StreamingEstimator::reset() {
  integrator_.reset();
  resampler_.reset();
  uniform_ = BreathingSignal{};
  uniform_.stage = SignalStage::uniform;
  uniform_.fs = params_.resample_fs;
  rates_emitted_ = 0;
  live_filter_.reset();
  rvs_.reset();
}

StreamingEstimator::Update StreamingEstimator::push(const ThermalFrame& frame) {
  Update up;
  const auto value = integrator_.push(emissivity_correct(frame, emissivity_));
  if (!value) return up;
  up.sample.emplace(frame.timestamp(), *value);

  for (const auto& [t, v] : resampler_.push(frame.timestamp(), *value)) {
    uniform_.times.push_back(t);
    uniform_.values.push_back(v);
    auto cols = rvs_.push(t, live_filter_.push(v));
    std::move(cols.begin(), cols.end(), std::back_inserter(up.rvs_columns));

    const std::size_t needed = rate_plan_.length + rates_emitted_ * rate_plan_.hop;
    if (uniform_.size() == needed) {
      up.rates.push_back(rate_of_last_window(uniform_, params_));
      ++rates_emitted_;
    }
  }
  return up;
}

} // namespace thermsense
