#pragma once

// Random inputs shared by unit and acceptance tests.

#include "thermsense/codec.hpp"
#include "thermsense/thermal.hpp"

#include <random>
#include <vector>

namespace gen {

using namespace thermsense;

// Valid sequence on the codec lattice: 1-12 pixels per side, 0-6 frames,
// about 5% dead pixels, strictly increasing microsecond timestamps.
inline ThermalSequence random_sequence(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 12);
  std::uniform_int_distribution<int> frames(0, 6);
  std::uniform_int_distribution<int> cell(kMinCell, kMaxCell);
  std::uniform_int_distribution<int> step_us(1, 500000);
  std::uniform_int_distribution<int> emis(1, 10000);
  std::bernoulli_distribution dead(0.05);

  ThermalSequence seq;
  seq.meta.width = dim(rng);
  seq.meta.height = dim(rng);
  seq.meta.nominal_fps = static_cast<float>(std::uniform_real_distribution<double>(0.5, 30.0)(rng));
  seq.meta.emissivity = emis(rng) / 1e4;
  const int n = frames(rng);
  std::uint64_t us = std::uniform_int_distribution<std::uint64_t>(0, 1'000'000)(rng);
  for (int i = 0; i < n; ++i) {
    std::vector<double> px(static_cast<std::size_t>(seq.meta.width) * seq.meta.height);
    for (double& p : px) p = dead(rng) ? kInvalid : from_cell(static_cast<std::uint16_t>(cell(rng)));
    seq.frames.emplace_back(us / 1e6, seq.meta.width, seq.meta.height, std::move(px));
    us += static_cast<std::uint64_t>(step_us(rng));
  }
  seq.meta.frame_count = seq.frames.size();
  return seq;
}

} // namespace gen
