#include "thermsense/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

namespace thermsense {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_row(std::string_view line, std::size_t expected, std::size_t line_no) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = std::min(line.find(',', pos), line.size());
    const std::string field(line.substr(pos, comma - pos));
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw CsvError("line " + std::to_string(line_no) + ": bad number \"" + field + "\"");
    }
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw CsvError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                   " fields, got " + std::to_string(out.size()));
  }
  return out;
}

template <typename Row>
void read_rows(const std::filesystem::path& path, std::string_view header, std::size_t fields,
               Row&& on_row) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw CsvError(path.string() + ": expected header \"" + std::string(header) + "\"");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    on_row(parse_row(line, fields, line_no), line_no);
  }
}

} // namespace

void write_signal_csv(const std::filesystem::path& path, const BreathingSignal& sig) {
  auto out = open_out(path);
  out << "t_s,value\n";
  for (std::size_t i = 0; i < sig.size(); ++i) {
    out << fmt(sig.times[i]) << ',' << fmt(sig.values[i]) << '\n';
  }
}

BreathingSignal read_signal_csv(const std::filesystem::path& path) {
  BreathingSignal sig;
  sig.stage = SignalStage::raw;
  read_rows(path, "t_s,value", 2, [&](const std::vector<double>& row, std::size_t line_no) {
    if (!sig.times.empty() && !(row[0] > sig.times.back())) {
      throw CsvError("line " + std::to_string(line_no) + ": time not increasing");
    }
    sig.times.push_back(row[0]);
    sig.values.push_back(row[1]);
  });
  return sig;
}

void write_rate_csv(const std::filesystem::path& path, const std::vector<RateEstimate>& rates) {
  auto out = open_out(path);
  out << "t_center_s,bpm,confidence\n";
  for (const auto& r : rates) {
    out << fmt(r.t_center) << ',' << fmt(r.bpm) << ',' << fmt(r.confidence) << '\n';
  }
}

std::vector<RateEstimate> read_rate_csv(const std::filesystem::path& path) {
  std::vector<RateEstimate> rates;
  read_rows(path, "t_center_s,bpm,confidence", 3,
            [&](const std::vector<double>& row, std::size_t) {
              rates.push_back({row[0], row[1], row[2]});
            });
  return rates;
}

} // namespace thermsense
