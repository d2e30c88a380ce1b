#pragma once

#include "thermsense/roi.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace thermsense::service {

// Server -> client messages. Frames travel as binary WebSocket messages:
//   u32 seq | u64 timestamp_us | u16 width | u16 height | width*height u16 cells
// (little-endian, 16-byte header). Everything else is JSON text.

inline constexpr std::size_t kFrameHeaderBytes = 16;

struct FrameMsg {
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<std::uint16_t> cells;

  bool operator==(const FrameMsg&) const = default;
};

struct SignalMsg {
  std::uint64_t seq = 0;
  double t_s = 0.0;
  double value = 0.0;
};

struct RateMsg {
  std::uint64_t seq = 0;
  double t_center_s = 0.0;
  double bpm = 0.0;
  double confidence = 0.0;
};

struct RvsColumnMsg {
  std::uint64_t seq = 0;
  double t_s = 0.0;
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  std::vector<double> mags; // low to high frequency, running-max normalized
};

struct RoiAckMsg {
  Roi roi;
};

struct ErrorMsg {
  std::string code;
  std::string detail;
};

struct EndMsg {
  std::string channel; // "frame", "signal", "rate" or "rvs"
};

using StreamMessage =
    std::variant<FrameMsg, SignalMsg, RateMsg, RvsColumnMsg, RoiAckMsg, ErrorMsg, EndMsg>;

inline constexpr const char* kChannels[] = {"frame", "signal", "rate", "rvs"};

struct WireMessage {
  bool binary = false;
  std::string payload;
};

WireMessage serialize(const StreamMessage& msg);

// Inverse of serialize(); used by protocol clients. Throws ProtocolError.
StreamMessage parse_server_message(const WireMessage& wire);

std::string encode_frame(const FrameMsg& frame);
FrameMsg decode_frame(std::span<const std::uint8_t> bytes);

// Client -> server commands.
struct SetRoiCmd {
  Roi roi;
};
struct PlayCmd {};
struct PauseCmd {};
struct SeekCmd {
  double t_s = 0.0;
};

using ClientCommand = std::variant<SetRoiCmd, PlayCmd, PauseCmd, SeekCmd>;

// Carries the wire error code sent back to the client.
class ProtocolError : public std::runtime_error {
public:
  ProtocolError(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

// Parses one JSON text message. Error codes: bad_json, unknown_type,
// bad_field. ROI bounds are checked by the replay driver, not here.
ClientCommand parse_client_message(std::string_view text);

std::string serialize(const ClientCommand& cmd);

} // namespace thermsense::service
