#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace thermsense::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,       // bad flags, missing or out-of-bounds ROI, bad parameters
  kInputFormat = 3, // unreadable, missing or malformed input file
  kProcessing = 4,  // input valid but unusable (too short, dead ROI...), I/O failure
};

// Entry point of the thermsense command line. args excludes the program
// name. Subcommands: synth, process, rate, rvs, serve.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace thermsense::cli
