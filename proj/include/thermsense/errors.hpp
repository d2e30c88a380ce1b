#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermsense {

// Bad argument to an operation (emissivity out of (0, 1], band above Nyquist, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A data structure violates one of its invariants. `index` names the
// offending element (frame index for sequences), or npos when not applicable.
class InvariantError : public std::runtime_error {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  InvariantError(const std::string& what, std::size_t index = npos)
      : std::runtime_error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

// Input too short for the requested analysis (fewer than 2 usable frames,
// signal shorter than one window, ...).
class TooShortError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ROI mostly covers dead pixels.
class UnusableFrameError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace thermsense
