#pragma once

#include "thermsense/thermal.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermsense {

// .tseq container, all integers little-endian:
//
//   header (20 bytes)
//     "TSEQ" | u16 version=1 | u16 width | u16 height | u32 frame_count |
//     f32 nominal_fps | u16 emissivity*1e4
//   per frame
//     u64 timestamp_us | width*height u16 centikelvin cells, row-major
//
// Cell 0 marks a dead pixel; valid cells lie in [23315, 43315].
inline constexpr std::size_t kHeaderBytes = 20;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::uint16_t kInvalidCell = 0;
inline constexpr std::uint16_t kMinCell = 23315;
inline constexpr std::uint16_t kMaxCell = 43315;

// Kelvin -> centikelvin cell, rounding half-up. Invalid pixels map to 0.
std::uint16_t to_cell(double kelvin) noexcept;
// Cell -> kelvin; 0 and out-of-range cells map to kInvalid.
double from_cell(std::uint16_t cell) noexcept;

std::uint64_t to_timestamp_us(double seconds) noexcept;

enum class DecodeErrorKind {
  bad_magic,
  unsupported_version,
  bad_header,
  truncated,
  cell_out_of_range,
  non_monotone_timestamp,
  trailing_bytes,
};

const char* to_string(DecodeErrorKind kind) noexcept;

class DecodeError : public std::runtime_error {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  DecodeError(DecodeErrorKind kind, std::size_t offset, const std::string& detail,
              std::size_t frame = npos, std::size_t pixel = npos);

  DecodeErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t frame() const noexcept { return frame_; }
  std::size_t pixel() const noexcept { return pixel_; }

private:
  DecodeErrorKind kind_;
  std::size_t offset_;
  std::size_t frame_;
  std::size_t pixel_;
};

// Validates `seq` (InvariantError with the offending frame index on failure;
// this includes two timestamps that collapse to the same microsecond) and
// serializes it.
std::vector<std::uint8_t> encode_sequence(const ThermalSequence& seq);

// Parses a .tseq byte stream. Safe on arbitrary input: every malformed input
// results in a DecodeError, never an over-read.
ThermalSequence decode_sequence(std::span<const std::uint8_t> bytes);

// Serializes one frame as its cell grid only (no timestamp), row-major.
std::vector<std::uint16_t> frame_cells(const ThermalFrame& frame);

void write_tseq(const std::filesystem::path& path, const ThermalSequence& seq);
ThermalSequence read_tseq(const std::filesystem::path& path);

} // namespace thermsense
