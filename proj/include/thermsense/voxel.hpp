#pragma once

#include "thermsense/roi.hpp"
#include "thermsense/signal.hpp"
#include "thermsense/thermal.hpp"

#include <cstdint>
#include <deque>
#include <optional>

namespace thermsense {

// Thermal voxel integration.
//
// Each ROI pixel is read as a column of unit voxels, one per `quantum_k`
// kelvin above a floor temperature; the breathing sample of a frame is the
// total number of whole voxels in the ROI. Exhaled air warms the nostril
// region and grows the voxel volume, inhaled ambient air shrinks it.
//
// Temperatures are compared on a 1 uK integer lattice so that decimal inputs
// such as 300.03 K count exactly 3 voxels of 0.01 K above 300.00 K.

enum class FloorMode {
  window_min, // minimum valid ROI temperature over the trailing window
  fixed,      // constant floor, fixed_floor_k
};

struct VoxelParams {
  double quantum_k = 0.01;
  FloorMode floor_mode = FloorMode::window_min;
  double fixed_floor_k = 300.0;
  double window_s = 30.0;
};

// Throws ParameterError on quantum <= 0 (or below 1 uK), a fixed floor
// outside the valid temperature range, or window_s <= 0.
void check_params(const VoxelParams& params);

struct RoiStats {
  long valid = 0;
  long total = 0;
  double min_k = kInvalid; // kInvalid when no pixel is valid

  // At least half of the ROI pixels are valid.
  bool usable() const noexcept { return total > 0 && 2 * valid >= total; }
};

RoiStats roi_stats(const ThermalFrame& frame, const Roi& roi);

// Sum over valid ROI pixels of floor(max(0, T - floor) / quantum).
// Throws RoiError when the ROI leaves the frame, ParameterError for a
// non-positive quantum and UnusableFrameError when more than half of the ROI
// is invalid.
std::uint64_t voxel_integrate_frame(const ThermalFrame& frame, const Roi& roi, double quantum_k,
                                    double floor_k);

// Frame-at-a-time integrator holding the sliding floor state. Feeding the
// frames of a sequence in order yields the samples of integrate_sequence().
class VoxelIntegrator {
public:
  VoxelIntegrator(const Roi& roi, const VoxelParams& params);

  // Returns the sample for a usable frame, nullopt for an unusable one.
  // Throws RoiError if the ROI does not fit the frame.
  std::optional<double> push(const ThermalFrame& frame);

  // Floor used for the most recent usable frame.
  double last_floor() const noexcept { return last_floor_; }
  const Roi& roi() const noexcept { return roi_; }
  void reset();

private:
  struct Entry {
    double t;
    double min_k;
  };

  Roi roi_;
  VoxelParams params_;
  std::deque<Entry> window_; // monotone: min_k increasing front to back
  double last_floor_ = kInvalid;
};

// One raw sample per usable frame, timestamped from the frame. Throws
// TooShortError when fewer than 2 frames are usable.
BreathingSignal integrate_sequence(const ThermalSequence& seq, const Roi& roi,
                                   const VoxelParams& params);

} // namespace thermsense
