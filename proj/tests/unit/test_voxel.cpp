#include "../oracles.hpp"

#include "thermsense/errors.hpp"
#include "thermsense/synth.hpp"
#include "thermsense/voxel.hpp"

#include <doctest.h>

#include <random>

using namespace thermsense;

TEST_CASE("voxel count of a hand-enumerated 2x2 ROI") {
  ThermalFrame f(0.0, 2, 2, {300.03, 300.01, 300.00, 300.025});
  CHECK(voxel_integrate_frame(f, {0, 0, 2, 2}, 0.01, 300.0) == 6);
  CHECK(oracle::stacked_voxels(f, {0, 0, 2, 2}, 0.01, 300.0) == 6);
}

TEST_CASE("pixels at or below the floor contribute nothing") {
  const auto f = ThermalFrame::uniform(0.0, 4, 4, 305.5);
  CHECK(voxel_integrate_frame(f, {0, 0, 4, 4}, 0.01, 305.5) == 0);
  CHECK(voxel_integrate_frame(f, {0, 0, 4, 4}, 0.01, 310.0) == 0);
}

TEST_CASE("invalid pixels are excluded; mostly-invalid ROI is unusable") {
  ThermalFrame f(0.0, 2, 2, {300.05, kInvalid, 300.02, 300.01});
  CHECK(voxel_integrate_frame(f, {0, 0, 2, 2}, 0.01, 300.0) == 8);
  ThermalFrame half(0.0, 2, 2, {300.05, kInvalid, kInvalid, 300.01});
  CHECK(voxel_integrate_frame(half, {0, 0, 2, 2}, 0.01, 300.0) == 6);
  ThermalFrame bad(0.0, 2, 2, {300.05, kInvalid, kInvalid, kInvalid});
  CHECK_THROWS_AS(voxel_integrate_frame(bad, {0, 0, 2, 2}, 0.01, 300.0), UnusableFrameError);
}

TEST_CASE("voxel parameter and bounds errors") {
  const auto f = ThermalFrame::uniform(0.0, 4, 4, 301.0);
  CHECK_THROWS_AS(voxel_integrate_frame(f, {2, 2, 4, 4}, 0.01, 300.0), RoiError);
  CHECK_THROWS_AS(voxel_integrate_frame(f, {0, 0, 2, 2}, 0.0, 300.0), ParameterError);
  CHECK_THROWS_AS(voxel_integrate_frame(f, {0, 0, 2, 2}, -0.01, 300.0), ParameterError);
}

TEST_CASE("shift by k quanta adds k voxels per valid pixel") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> cell(29000, 31000);
  std::uniform_int_distribution<int> kdist(0, 50);
  std::bernoulli_distribution dead(0.1);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> px(36);
    for (double& p : px) p = dead(rng) ? kInvalid : cell(rng) / 100.0;
    const ThermalFrame f(0.0, 6, 6, px);
    const int k = kdist(rng);
    std::vector<double> shifted(px);
    for (double& p : shifted) p = std::isnan(p) ? p : (std::llround(p * 100) + k) / 100.0;
    const ThermalFrame g(0.0, 6, 6, shifted);
    const Roi roi{1, 1, 4, 4};
    const auto stats = roi_stats(f, roi);
    if (!stats.usable()) continue;
    // floor at or below every pixel so no clipping at zero
    const double floor_k = 289.0;
    CHECK(voxel_integrate_frame(g, roi, 0.01, floor_k) ==
          voxel_integrate_frame(f, roi, 0.01, floor_k) + static_cast<std::uint64_t>(k) * stats.valid);
  }
}

TEST_CASE("enlarging the ROI never decreases the count at fixed floor") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> temp(295.0, 310.0);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> px(100);
    for (double& p : px) p = temp(rng);
    const ThermalFrame f(0.0, 10, 10, px);
    const auto small = voxel_integrate_frame(f, {3, 3, 3, 3}, 0.01, 300.0);
    const auto large = voxel_integrate_frame(f, {2, 2, 5, 6}, 0.01, 300.0);
    CHECK(large >= small);
  }
}

TEST_CASE("integrate_sequence matches a brute-force loop with a sliding floor") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> temp(300.0, 302.0);
  std::bernoulli_distribution dead(0.3);
  ThermalSequence seq;
  seq.meta.width = 5;
  seq.meta.height = 4;
  double t = 0.0;
  for (int i = 0; i < 120; ++i) {
    std::vector<double> px(20);
    for (double& p : px) p = dead(rng) ? kInvalid : temp(rng);
    seq.frames.emplace_back(t, 5, 4, px);
    t += std::uniform_real_distribution<double>(0.05, 0.2)(rng);
  }
  seq.meta.frame_count = seq.frames.size();
  const Roi roi{1, 1, 3, 2};
  VoxelParams params;
  params.window_s = 3.0;

  std::vector<bool> usable;
  for (const auto& f : seq.frames) usable.push_back(roi_stats(f, roi).usable());

  const auto sig = integrate_sequence(seq, roi, params);
  std::size_t k = 0;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    if (!usable[i]) continue;
    REQUIRE(k < sig.size());
    const double floor_k = oracle::window_min_floor(seq.frames, usable, roi, i, params.window_s);
    CHECK(sig.times[k] == seq.frames[i].timestamp());
    CHECK(sig.values[k] == static_cast<double>(oracle::stacked_voxels(seq.frames[i], roi, 0.01, floor_k)));
    ++k;
  }
  CHECK(k == sig.size());
  CHECK(sig.size() < seq.frames.size()); // some frames were skipped
}

TEST_CASE("constant sequence gives a constant signal") {
  ThermalSequence seq;
  seq.meta.width = 4;
  seq.meta.height = 4;
  for (int i = 0; i < 20; ++i) seq.frames.push_back(ThermalFrame::uniform(i * 0.1, 4, 4, 305.0));
  seq.meta.frame_count = seq.frames.size();
  const auto sig = integrate_sequence(seq, {0, 0, 4, 4}, VoxelParams{});
  REQUIRE(sig.size() == 20);
  for (double v : sig.values) CHECK(v == sig.values.front());
}

TEST_CASE("fewer than two usable frames is an empty-signal error") {
  ThermalSequence seq;
  seq.meta.width = 2;
  seq.meta.height = 2;
  seq.frames.push_back(ThermalFrame::uniform(0.0, 2, 2, 300.0));
  seq.frames.push_back(ThermalFrame(0.1, 2, 2, {kInvalid, kInvalid, kInvalid, 300.0}));
  seq.meta.frame_count = 2;
  CHECK_THROWS_AS(integrate_sequence(seq, {0, 0, 2, 2}, VoxelParams{}), TooShortError);
}

TEST_CASE("fixed floor mode and parameter checks") {
  VoxelParams p;
  p.floor_mode = FloorMode::fixed;
  p.fixed_floor_k = 100.0;
  CHECK_THROWS_AS(check_params(p), ParameterError);
  p.fixed_floor_k = 300.0;
  CHECK_NOTHROW(check_params(p));
  VoxelIntegrator integ({0, 0, 2, 2}, p);
  CHECK(*integ.push(ThermalFrame::uniform(0.0, 2, 2, 300.5)) == 200.0);
}
