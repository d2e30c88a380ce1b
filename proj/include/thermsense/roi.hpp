#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thermsense {

// Axis-aligned pixel rectangle, top-left origin. Selected by hand over the
// nostrils; nothing in this library guesses one.
struct Roi {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long area() const noexcept { return static_cast<long>(w) * h; }
  bool operator==(const Roi&) const = default;
};

// Minimum pixel count for a region to carry a thermal distribution.
inline constexpr long kMinRoiArea = 4;

class RoiError : public std::invalid_argument {
public:
  enum class Edge { none, left, top, right, bottom };

  RoiError(const std::string& what, Edge edge = Edge::none)
      : std::invalid_argument(what), edge_(edge) {}

  Edge edge() const noexcept { return edge_; }

private:
  Edge edge_;
};

const char* to_string(RoiError::Edge edge) noexcept;

// Throws RoiError naming the first violated edge (left, top, right, bottom)
// or a degenerate extent.
void check_roi(const Roi& roi, int frame_width, int frame_height);

bool roi_fits(const Roi& roi, int frame_width, int frame_height) noexcept;

// Parses "x,y,w,h". Throws RoiError on malformed text or w*h < 4.
Roi parse_roi(std::string_view text);

std::string format_roi(const Roi& roi);

} // namespace thermsense
