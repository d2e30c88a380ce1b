#include "thermsense/roi.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

namespace thermsense {

const char* to_string(RoiError::Edge edge) noexcept {
  switch (edge) {
    case RoiError::Edge::none: return "none";
    case RoiError::Edge::left: return "left";
    case RoiError::Edge::top: return "top";
    case RoiError::Edge::right: return "right";
    case RoiError::Edge::bottom: return "bottom";
  }
  return "none";
}

void check_roi(const Roi& roi, int frame_width, int frame_height) {
  using Edge = RoiError::Edge;
  if (roi.w <= 0 || roi.h <= 0 || roi.area() < kMinRoiArea) {
    throw RoiError("ROI " + format_roi(roi) + " is degenerate (need w, h > 0 and w*h >= " +
                   std::to_string(kMinRoiArea) + ")");
  }
  if (roi.x < 0) throw RoiError("ROI left edge x=" + std::to_string(roi.x) + " < 0", Edge::left);
  if (roi.y < 0) throw RoiError("ROI top edge y=" + std::to_string(roi.y) + " < 0", Edge::top);
  if (static_cast<long>(roi.x) + roi.w > frame_width) {
    throw RoiError("ROI right edge x+w=" + std::to_string(static_cast<long>(roi.x) + roi.w) +
                       " exceeds frame width " + std::to_string(frame_width),
                   Edge::right);
  }
  if (static_cast<long>(roi.y) + roi.h > frame_height) {
    throw RoiError("ROI bottom edge y+h=" + std::to_string(static_cast<long>(roi.y) + roi.h) +
                       " exceeds frame height " + std::to_string(frame_height),
                   Edge::bottom);
  }
}

bool roi_fits(const Roi& roi, int frame_width, int frame_height) noexcept {
  try {
    check_roi(roi, frame_width, frame_height);
    return true;
  } catch (const RoiError&) {
    return false;
  }
}

Roi parse_roi(std::string_view text) {
  std::vector<int> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const auto field = text.substr(pos, comma - pos);
    int value = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
      throw RoiError("malformed ROI \"" + std::string(text) + "\", expected x,y,w,h");
    }
    parts.push_back(value);
    pos = comma + 1;
  }
  if (parts.size() != 4) {
    throw RoiError("malformed ROI \"" + std::string(text) + "\", expected x,y,w,h");
  }
  Roi roi{parts[0], parts[1], parts[2], parts[3]};
  if (roi.w <= 0 || roi.h <= 0 || roi.area() < kMinRoiArea) {
    throw RoiError("ROI " + format_roi(roi) + " is degenerate (need w*h >= 4)");
  }
  return roi;
}

std::string format_roi(const Roi& roi) {
  return std::to_string(roi.x) + "," + std::to_string(roi.y) + "," + std::to_string(roi.w) + "," +
         std::to_string(roi.h);
}

} // namespace thermsense
