#pragma once

#include "thermsense/rate.hpp"
#include "thermsense/signal.hpp"

#include <filesystem>
#include <stdexcept>
#include <vector>

namespace thermsense {

class CsvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Header t_s,value. Values are written with 17 significant digits so that a
// read-back is exact.
void write_signal_csv(const std::filesystem::path& path, const BreathingSignal& sig);
// Reads a signal CSV as a raw-stage signal. Throws CsvError on a bad header,
// malformed row or non-increasing time.
BreathingSignal read_signal_csv(const std::filesystem::path& path);

// Header t_center_s,bpm,confidence.
void write_rate_csv(const std::filesystem::path& path, const std::vector<RateEstimate>& rates);
std::vector<RateEstimate> read_rate_csv(const std::filesystem::path& path);

} // namespace thermsense
