#include "thermsense/codec.hpp"

#include "thermsense/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace thermsense {

namespace {

class Writer {
public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void bytes(const char* s, std::size_t n) { out_.insert(out_.end(), s, s + n); }

private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw DecodeError(DecodeErrorKind::truncated, pos_,
                        std::string("need ") + std::to_string(n) + " bytes for " + what + ", " +
                            std::to_string(remaining()) + " left");
    }
  }
  std::uint16_t u16() {
    std::uint16_t v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

} // namespace

std::uint16_t to_cell(double kelvin) noexcept {
  if (!is_valid(kelvin)) return kInvalidCell;
  return static_cast<std::uint16_t>(std::floor(kelvin * 100.0 + 0.5));
}

double from_cell(std::uint16_t cell) noexcept {
  if (cell < kMinCell || cell > kMaxCell) return kInvalid;
  return static_cast<double>(cell) / 100.0;
}

std::uint64_t to_timestamp_us(double seconds) noexcept {
  return static_cast<std::uint64_t>(std::floor(seconds * 1e6 + 0.5));
}

const char* to_string(DecodeErrorKind kind) noexcept {
  switch (kind) {
    case DecodeErrorKind::bad_magic: return "bad_magic";
    case DecodeErrorKind::unsupported_version: return "unsupported_version";
    case DecodeErrorKind::bad_header: return "bad_header";
    case DecodeErrorKind::truncated: return "truncated";
    case DecodeErrorKind::cell_out_of_range: return "cell_out_of_range";
    case DecodeErrorKind::non_monotone_timestamp: return "non_monotone_timestamp";
    case DecodeErrorKind::trailing_bytes: return "trailing_bytes";
  }
  return "unknown";
}

DecodeError::DecodeError(DecodeErrorKind kind, std::size_t offset, const std::string& detail,
                         std::size_t frame, std::size_t pixel)
    : std::runtime_error(std::string(to_string(kind)) + " at byte " + std::to_string(offset) +
                         ": " + detail),
      kind_(kind), offset_(offset), frame_(frame), pixel_(pixel) {}

std::vector<std::uint16_t> frame_cells(const ThermalFrame& frame) {
  std::vector<std::uint16_t> cells;
  cells.reserve(frame.size());
  for (double p : frame.pixels()) cells.push_back(to_cell(p));
  return cells;
}

std::vector<std::uint8_t> encode_sequence(const ThermalSequence& seq) {
  validate(seq);
  const auto& m = seq.meta;
  if (seq.frames.size() > 0xFFFFFFFFu) {
    throw InvariantError("too many frames for the u32 frame_count field");
  }
  const long emissivity_code = std::lround(m.emissivity * 1e4);
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    if (to_timestamp_us(seq.frames[i].timestamp()) <=
        to_timestamp_us(seq.frames[i - 1].timestamp())) {
      throw InvariantError("frame " + std::to_string(i) +
                               " timestamp collides with its predecessor at microsecond resolution",
                           i);
    }
  }

  std::vector<std::uint8_t> out;
  const std::size_t cells = static_cast<std::size_t>(m.width) * static_cast<std::size_t>(m.height);
  out.reserve(kHeaderBytes + seq.frames.size() * (8 + 2 * cells));
  Writer w(out);
  w.bytes("TSEQ", 4);
  w.u16(kFormatVersion);
  w.u16(static_cast<std::uint16_t>(m.width));
  w.u16(static_cast<std::uint16_t>(m.height));
  w.u32(static_cast<std::uint32_t>(seq.frames.size()));
  w.u32(std::bit_cast<std::uint32_t>(m.nominal_fps));
  w.u16(static_cast<std::uint16_t>(emissivity_code));
  for (const auto& f : seq.frames) {
    w.u64(to_timestamp_us(f.timestamp()));
    for (double p : f.pixels()) w.u16(to_cell(p));
  }
  return out;
}

ThermalSequence decode_sequence(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "TSEQ", 4) != 0) {
    throw DecodeError(DecodeErrorKind::bad_magic, 0, "stream does not start with \"TSEQ\"");
  }
  r.need(kHeaderBytes, "header");
  r.u32();
  const std::uint16_t version = r.u16();
  if (version != kFormatVersion) {
    throw DecodeError(DecodeErrorKind::unsupported_version, 4,
                      "version " + std::to_string(version));
  }
  const std::uint16_t width = r.u16();
  const std::uint16_t height = r.u16();
  if (width == 0 || height == 0) {
    throw DecodeError(DecodeErrorKind::bad_header, 6, "zero frame dimension");
  }
  const std::uint32_t frame_count = r.u32();
  const float fps = std::bit_cast<float>(r.u32());
  if (!std::isfinite(fps) || !(fps > 0.0f)) {
    throw DecodeError(DecodeErrorKind::bad_header, 14, "nominal_fps must be positive and finite");
  }
  const std::uint16_t emissivity_code = r.u16();
  if (emissivity_code == 0 || emissivity_code > 10000) {
    throw DecodeError(DecodeErrorKind::bad_header, 18,
                      "emissivity code " + std::to_string(emissivity_code) + " outside (0, 10000]");
  }

  ThermalSequence seq;
  seq.meta.width = width;
  seq.meta.height = height;
  seq.meta.nominal_fps = fps;
  seq.meta.emissivity = static_cast<double>(emissivity_code) / 1e4;
  seq.meta.frame_count = frame_count;

  const std::size_t cells = static_cast<std::size_t>(width) * height;
  const std::size_t frame_bytes = 8 + 2 * cells;
  seq.frames.reserve(std::min<std::size_t>(frame_count, r.remaining() / frame_bytes));

  std::uint64_t prev_us = 0;
  for (std::size_t i = 0; i < frame_count; ++i) {
    r.need(frame_bytes, ("frame " + std::to_string(i)).c_str());
    const std::size_t ts_offset = r.offset();
    const std::uint64_t ts_us = r.u64();
    if (i > 0 && ts_us <= prev_us) {
      throw DecodeError(DecodeErrorKind::non_monotone_timestamp, ts_offset,
                        "frame " + std::to_string(i) + " timestamp " + std::to_string(ts_us) +
                            " us <= previous " + std::to_string(prev_us) + " us",
                        i);
    }
    prev_us = ts_us;
    std::vector<double> pixels(cells);
    for (std::size_t p = 0; p < cells; ++p) {
      const std::size_t cell_offset = r.offset();
      const std::uint16_t cell = r.u16();
      if (cell != kInvalidCell && (cell < kMinCell || cell > kMaxCell)) {
        throw DecodeError(DecodeErrorKind::cell_out_of_range, cell_offset,
                          "frame " + std::to_string(i) + " pixel " + std::to_string(p) +
                              " cell " + std::to_string(cell),
                          i, p);
      }
      pixels[p] = from_cell(cell);
    }
    seq.frames.emplace_back(static_cast<double>(ts_us) / 1e6, width, height, std::move(pixels));
  }
  if (r.remaining() != 0) {
    throw DecodeError(DecodeErrorKind::trailing_bytes, r.offset(),
                      std::to_string(r.remaining()) + " bytes after last frame");
  }
  return seq;
}

void write_tseq(const std::filesystem::path& path, const ThermalSequence& seq) {
  const auto bytes = encode_sequence(seq);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ThermalSequence read_tseq(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_sequence(bytes);
}

} // namespace thermsense
