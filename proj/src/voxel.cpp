#include "thermsense/voxel.hpp"

#include "thermsense/errors.hpp"

#include <cmath>
#include <string>

namespace thermsense {

namespace {

std::int64_t to_micro_kelvin(double kelvin) {
  return std::llround(kelvin * 1e6);
}

std::uint64_t count_voxels(const ThermalFrame& frame, const Roi& roi, std::int64_t quantum_uk,
                           std::int64_t floor_uk) {
  std::uint64_t count = 0;
  for (int y = roi.y; y < roi.y + roi.h; ++y) {
    for (int x = roi.x; x < roi.x + roi.w; ++x) {
      const double p = frame.at(x, y);
      if (!is_valid(p)) continue;
      const std::int64_t above = to_micro_kelvin(p) - floor_uk;
      if (above > 0) count += static_cast<std::uint64_t>(above / quantum_uk);
    }
  }
  return count;
}

std::int64_t checked_quantum(double quantum_k) {
  if (!(quantum_k > 0.0) || !std::isfinite(quantum_k)) {
    throw ParameterError("voxel quantum must be positive");
  }
  const std::int64_t q = to_micro_kelvin(quantum_k);
  if (q < 1) throw ParameterError("voxel quantum below 1 uK");
  return q;
}

} // namespace

void check_params(const VoxelParams& params) {
  checked_quantum(params.quantum_k);
  if (params.floor_mode == FloorMode::fixed && !is_valid(params.fixed_floor_k)) {
    throw ParameterError("fixed floor " + std::to_string(params.fixed_floor_k) +
                         " K outside the valid temperature range");
  }
  if (!(params.window_s > 0.0)) throw ParameterError("floor window must be positive");
}

RoiStats roi_stats(const ThermalFrame& frame, const Roi& roi) {
  RoiStats s;
  s.total = roi.area();
  for (int y = roi.y; y < roi.y + roi.h; ++y) {
    for (int x = roi.x; x < roi.x + roi.w; ++x) {
      const double p = frame.at(x, y);
      if (!is_valid(p)) continue;
      ++s.valid;
      if (std::isnan(s.min_k) || p < s.min_k) s.min_k = p;
    }
  }
  return s;
}

std::uint64_t voxel_integrate_frame(const ThermalFrame& frame, const Roi& roi, double quantum_k,
                                    double floor_k) {
  check_roi(roi, frame.width(), frame.height());
  const std::int64_t q = checked_quantum(quantum_k);
  if (!std::isfinite(floor_k)) throw ParameterError("voxel floor must be finite");
  const RoiStats stats = roi_stats(frame, roi);
  if (!stats.usable()) {
    throw UnusableFrameError("ROI " + format_roi(roi) + " has only " + std::to_string(stats.valid) +
                             " of " + std::to_string(stats.total) + " pixels valid");
  }
  return count_voxels(frame, roi, q, to_micro_kelvin(floor_k));
}

VoxelIntegrator::VoxelIntegrator(const Roi& roi, const VoxelParams& params)
    : roi_(roi), params_(params) {
  check_params(params);
}

void VoxelIntegrator::reset() {
  window_.clear();
  last_floor_ = kInvalid;
}

std::optional<double> VoxelIntegrator::push(const ThermalFrame& frame) {
  check_roi(roi_, frame.width(), frame.height());
  const RoiStats stats = roi_stats(frame, roi_);
  if (!stats.usable()) return std::nullopt;

  double floor_k = params_.fixed_floor_k;
  if (params_.floor_mode == FloorMode::window_min) {
    const double t = frame.timestamp();
    while (!window_.empty() && window_.back().min_k >= stats.min_k) window_.pop_back();
    window_.push_back({t, stats.min_k});
    while (window_.front().t < t - params_.window_s) window_.pop_front();
    floor_k = window_.front().min_k;
  }
  last_floor_ = floor_k;
  const auto count = count_voxels(frame, roi_, to_micro_kelvin(params_.quantum_k),
                                  to_micro_kelvin(floor_k));
  return static_cast<double>(count);
}

BreathingSignal integrate_sequence(const ThermalSequence& seq, const Roi& roi,
                                   const VoxelParams& params) {
  check_roi(roi, seq.meta.width, seq.meta.height);
  VoxelIntegrator integrator(roi, params);
  BreathingSignal sig;
  sig.stage = SignalStage::raw;
  for (const auto& frame : seq.frames) {
    if (auto v = integrator.push(frame)) {
      sig.times.push_back(frame.timestamp());
      sig.values.push_back(*v);
    }
  }
  if (sig.size() < 2) {
    throw TooShortError("only " + std::to_string(sig.size()) + " usable frames for ROI " +
                        format_roi(roi));
  }
  return sig;
}

} // namespace thermsense
