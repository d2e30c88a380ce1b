#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace thermsense {

// Radiometric range a frame may carry. Anything outside is stored as invalid.
inline constexpr double kMinKelvin = 233.15;
inline constexpr double kMaxKelvin = 433.15;

// Dead-pixel marker. Test with is_valid(), never with ==.
inline constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

inline bool is_valid(double kelvin) noexcept {
  return !std::isnan(kelvin) && kelvin >= kMinKelvin && kelvin <= kMaxKelvin;
}

// Acquisition defaults of the low-cost camera this pipeline targets.
inline constexpr std::uint16_t kDefaultWidth = 160;
inline constexpr std::uint16_t kDefaultHeight = 120;
inline constexpr float kDefaultFps = 8.7f;
inline constexpr double kSkinEmissivity = 0.98;

// One timestamped radiometric image. Pixels are row-major kelvin values with
// the top-left pixel first; out-of-range inputs are replaced by kInvalid on
// construction.
class ThermalFrame {
public:
  ThermalFrame() = default;
  ThermalFrame(double timestamp_s, int width, int height, std::vector<double> pixels);

  // Frame filled with one temperature.
  static ThermalFrame uniform(double timestamp_s, int width, int height, double kelvin);

  double timestamp() const noexcept { return timestamp_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  double at(int x, int y) const { return pixels_[index(x, y)]; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  // Replaces one pixel, re-applying the validity rule.
  void set(int x, int y, double kelvin);

  bool operator==(const ThermalFrame& other) const;

private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  double timestamp_ = 0.0;
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

struct SequenceMeta {
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  float nominal_fps = kDefaultFps; // stored as f32 in .tseq
  double emissivity = kSkinEmissivity;
  std::size_t frame_count = 0;

  bool operator==(const SequenceMeta&) const = default;
};

struct ThermalSequence {
  SequenceMeta meta;
  std::vector<ThermalFrame> frames;

  bool operator==(const ThermalSequence&) const = default;
};

// Throws InvariantError (carrying the offending frame index where there is
// one) if `seq` breaks a sequence invariant: meta/frame dimension mismatch,
// frame_count mismatch, non-increasing or negative timestamps, bad fps or
// emissivity.
void validate(const ThermalSequence& seq);

} // namespace thermsense
