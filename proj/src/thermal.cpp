#include "thermsense/thermal.hpp"

#include "thermsense/errors.hpp"

#include <algorithm>
#include <string>

namespace thermsense {

ThermalFrame::ThermalFrame(double timestamp_s, int width, int height, std::vector<double> pixels)
    : timestamp_(timestamp_s), width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw InvariantError("frame dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvariantError("pixel count " + std::to_string(pixels_.size()) + " != " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  if (!std::isfinite(timestamp_s) || timestamp_s < 0.0) {
    throw InvariantError("frame timestamp must be finite and non-negative");
  }
  for (double& p : pixels_) {
    if (!is_valid(p)) p = kInvalid;
  }
}

ThermalFrame ThermalFrame::uniform(double timestamp_s, int width, int height, double kelvin) {
  return ThermalFrame(timestamp_s, width, height,
                      std::vector<double>(static_cast<std::size_t>(width) * height, kelvin));
}

void ThermalFrame::set(int x, int y, double kelvin) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    throw InvariantError("pixel coordinate outside frame");
  }
  pixels_[index(x, y)] = is_valid(kelvin) ? kelvin : kInvalid;
}

bool ThermalFrame::operator==(const ThermalFrame& other) const {
  if (timestamp_ != other.timestamp_ || width_ != other.width_ || height_ != other.height_) {
    return false;
  }
  return std::equal(pixels_.begin(), pixels_.end(), other.pixels_.begin(), other.pixels_.end(),
                    [](double a, double b) {
                      const bool va = is_valid(a);
                      return va == is_valid(b) && (!va || a == b);
                    });
}

void validate(const ThermalSequence& seq) {
  const auto& m = seq.meta;
  if (m.width <= 0 || m.height <= 0 || m.width > 0xFFFF || m.height > 0xFFFF) {
    throw InvariantError("sequence dimensions must be in [1, 65535]");
  }
  if (!(m.nominal_fps > 0.0) || !std::isfinite(m.nominal_fps)) {
    throw InvariantError("nominal_fps must be positive");
  }
  if (!(m.emissivity > 0.0 && m.emissivity <= 1.0)) {
    throw InvariantError("emissivity must be in (0, 1]");
  }
  if (m.frame_count != seq.frames.size()) {
    throw InvariantError("frame_count " + std::to_string(m.frame_count) + " but " +
                         std::to_string(seq.frames.size()) + " frames present");
  }
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const auto& f = seq.frames[i];
    if (f.width() != m.width || f.height() != m.height) {
      throw InvariantError("frame " + std::to_string(i) + " is " + std::to_string(f.width()) +
                               "x" + std::to_string(f.height()) + ", sequence is " +
                               std::to_string(m.width) + "x" + std::to_string(m.height),
                           i);
    }
    if (i > 0 && !(f.timestamp() > seq.frames[i - 1].timestamp())) {
      throw InvariantError("frame " + std::to_string(i) + " timestamp not strictly increasing", i);
    }
  }
}

} // namespace thermsense
