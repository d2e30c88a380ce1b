#pragma once

#include "thermsense/bandpass.hpp"
#include "thermsense/rate.hpp"
#include "thermsense/roi.hpp"
#include "thermsense/rvs.hpp"
#include "thermsense/signal.hpp"
#include "thermsense/thermal.hpp"
#include "thermsense/voxel.hpp"

#include <optional>
#include <vector>

namespace thermsense {

// Parameters of every stage between a thermal sequence and its outputs.
struct PipelineParams {
  VoxelParams voxel;
  BandpassSpec band;
  double rate_window_s = 30.0;
  double rate_hop_s = 1.0;
  RvsParams rvs;
  double resample_fs = 9.0;

  RateParams rate_params() const {
    return RateParams::from_band(band, rate_window_s, rate_hop_s);
  }
};

// Throws ParameterError if any stage would reject its parameters.
void check_params(const PipelineParams& params);

struct PipelineResult {
  BreathingSignal raw;      // one voxel count per usable frame
  BreathingSignal uniform;  // raw resampled at resample_fs
  BreathingSignal filtered; // uniform after the bandpass
  std::vector<RateEstimate> rates;
  Rvs rvs;
};

// emissivity correction -> voxel integration -> uniform resampling ->
// bandpass -> sliding rate + RVS.
PipelineResult process_sequence(const ThermalSequence& seq, const Roi& roi,
                                const PipelineParams& params);

// Stages after integration, for a raw signal obtained elsewhere.
PipelineResult process_signal(const BreathingSignal& raw, const PipelineParams& params);

// Rate of the last complete window of a uniform signal prefix, computed the
// way process_signal() would on that prefix alone.
RateEstimate rate_of_last_window(const BreathingSignal& uniform, const PipelineParams& params);

// Frame-at-a-time form of the pipeline for live replay. Owns all estimator
// state; one thread feeds it.
//
// - every usable frame yields a raw signal sample identical to the
//   corresponding sample of process_sequence().raw;
// - each time the uniform signal completes another rate window, the rate is
//   computed from the whole uniform prefix (zero-phase filtered), so it equals
//   the last estimate of process_signal() on that prefix;
// - RVS columns come from a causal single-pass bandpass feeding an
//   RvsStream, so they lag by the filter's group delay and are normalized by
//   the running maximum.
class StreamingEstimator {
public:
  struct Update {
    std::optional<std::pair<double, double>> sample; // (t_s, value) of the raw signal
    std::vector<RateEstimate> rates;
    std::vector<RvsColumn> rvs_columns;
  };

  StreamingEstimator(const Roi& roi, const PipelineParams& params, double emissivity);

  // Throws RoiError if the ROI does not fit the frame.
  Update push(const ThermalFrame& frame);
  void reset();

  const Roi& roi() const noexcept { return integrator_.roi(); }
  const PipelineParams& params() const noexcept { return params_; }
  const BreathingSignal& uniform() const noexcept { return uniform_; }
  const RvsStream& rvs_stream() const noexcept { return rvs_; }

private:
  PipelineParams params_;
  double emissivity_;
  VoxelIntegrator integrator_;
  UniformResampler resampler_;
  BreathingSignal uniform_;
  WindowPlan rate_plan_;
  std::size_t rates_emitted_ = 0;
  CausalBandpass live_filter_;
  RvsStream rvs_;
};

} // namespace thermsense
