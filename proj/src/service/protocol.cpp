#include "thermsense/service/protocol.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace thermsense::service {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void put(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get(std::span<const std::uint8_t> in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

int int_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    throw ProtocolError("bad_field", std::string("field \"") + key + "\" must be an integer");
  }
  const auto v = it->get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ProtocolError("bad_field", std::string("field \"") + key + "\" out of range");
  }
  return static_cast<int>(v);
}

double number_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ProtocolError("bad_field", std::string("field \"") + key + "\" must be a number");
  }
  return it->get<double>();
}

} // namespace

std::string encode_frame(const FrameMsg& f) {
  std::string out;
  out.reserve(kFrameHeaderBytes + 2 * f.cells.size());
  put(out, f.seq, 4);
  put(out, f.timestamp_us, 8);
  put(out, f.width, 2);
  put(out, f.height, 2);
  for (std::uint16_t c : f.cells) put(out, c, 2);
  return out;
}

FrameMsg decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) throw ProtocolError("bad_frame", "frame shorter than header");
  FrameMsg f;
  f.seq = static_cast<std::uint32_t>(get(bytes, 0, 4));
  f.timestamp_us = get(bytes, 4, 8);
  f.width = static_cast<std::uint16_t>(get(bytes, 12, 2));
  f.height = static_cast<std::uint16_t>(get(bytes, 14, 2));
  const std::size_t cells = static_cast<std::size_t>(f.width) * f.height;
  if (bytes.size() != kFrameHeaderBytes + 2 * cells) {
    throw ProtocolError("bad_frame", "frame payload size does not match its header");
  }
  f.cells.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    f.cells[i] = static_cast<std::uint16_t>(get(bytes, kFrameHeaderBytes + 2 * i, 2));
  }
  return f;
}

WireMessage serialize(const StreamMessage& msg) {
  return std::visit(
      overloaded{
          [](const FrameMsg& f) { return WireMessage{true, encode_frame(f)}; },
          [](const SignalMsg& m) {
            return WireMessage{false, json{{"type", "signal"}, {"seq", m.seq}, {"t_s", m.t_s},
                                           {"value", m.value}}
                                          .dump()};
          },
          [](const RateMsg& m) {
            return WireMessage{false, json{{"type", "rate"},
                                           {"seq", m.seq},
                                           {"t_center_s", m.t_center_s},
                                           {"bpm", m.bpm},
                                           {"confidence", m.confidence}}
                                          .dump()};
          },
          [](const RvsColumnMsg& m) {
            return WireMessage{false, json{{"type", "rvs_col"},
                                           {"seq", m.seq},
                                           {"t_s", m.t_s},
                                           {"f_lo_hz", m.f_lo_hz},
                                           {"f_hi_hz", m.f_hi_hz},
                                           {"mags", m.mags}}
                                          .dump()};
          },
          [](const RoiAckMsg& m) {
            return WireMessage{false, json{{"type", "roi_ack"},
                                           {"x", m.roi.x},
                                           {"y", m.roi.y},
                                           {"w", m.roi.w},
                                           {"h", m.roi.h}}
                                          .dump()};
          },
          [](const ErrorMsg& m) {
            return WireMessage{false,
                               json{{"type", "error"}, {"code", m.code}, {"detail", m.detail}}.dump()};
          },
          [](const EndMsg& m) {
            return WireMessage{false, json{{"type", "end"}, {"channel", m.channel}}.dump()};
          },
      },
      msg);
}

StreamMessage parse_server_message(const WireMessage& wire) {
  if (wire.binary) {
    return decode_frame(std::span(reinterpret_cast<const std::uint8_t*>(wire.payload.data()),
                                  wire.payload.size()));
  }
  json j;
  try {
    j = json::parse(wire.payload);
  } catch (const json::exception& e) {
    throw ProtocolError("bad_json", e.what());
  }
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "signal") return SignalMsg{j.at("seq"), j.at("t_s"), j.at("value")};
    if (type == "rate") {
      return RateMsg{j.at("seq"), j.at("t_center_s"), j.at("bpm"), j.at("confidence")};
    }
    if (type == "rvs_col") {
      return RvsColumnMsg{j.at("seq"), j.at("t_s"), j.at("f_lo_hz"), j.at("f_hi_hz"),
                          j.at("mags").get<std::vector<double>>()};
    }
    if (type == "roi_ack") return RoiAckMsg{Roi{j.at("x"), j.at("y"), j.at("w"), j.at("h")}};
    if (type == "error") return ErrorMsg{j.at("code"), j.at("detail")};
    if (type == "end") return EndMsg{j.at("channel")};
    throw ProtocolError("unknown_type", "unknown message type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw ProtocolError("bad_field", e.what());
  }
}

ClientCommand parse_client_message(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ProtocolError("bad_json", e.what());
  }
  if (!j.is_object()) throw ProtocolError("bad_json", "message must be a JSON object");
  const auto type_it = j.find("type");
  if (type_it == j.end() || !type_it->is_string()) {
    throw ProtocolError("bad_field", "missing string field \"type\"");
  }
  const std::string type = type_it->get<std::string>();
  if (type == "set_roi") {
    return SetRoiCmd{Roi{int_field(j, "x"), int_field(j, "y"), int_field(j, "w"), int_field(j, "h")}};
  }
  if (type == "play") return PlayCmd{};
  if (type == "pause") return PauseCmd{};
  if (type == "seek") {
    const double t = number_field(j, "t_s");
    if (!std::isfinite(t) || t < 0.0) throw ProtocolError("bad_field", "t_s must be >= 0");
    return SeekCmd{t};
  }
  throw ProtocolError("unknown_type", "unknown command \"" + type + "\"");
}

std::string serialize(const ClientCommand& cmd) {
  return std::visit(overloaded{
                        [](const SetRoiCmd& c) {
                          return json{{"type", "set_roi"}, {"x", c.roi.x}, {"y", c.roi.y},
                                      {"w", c.roi.w}, {"h", c.roi.h}}
                              .dump();
                        },
                        [](const PlayCmd&) { return json{{"type", "play"}}.dump(); },
                        [](const PauseCmd&) { return json{{"type", "pause"}}.dump(); },
                        [](const SeekCmd& c) { return json{{"type", "seek"}, {"t_s", c.t_s}}.dump(); },
                    },
                    cmd);
}

} // namespace thermsense::service
