#pragma once

#include <stdexcept>
#include <string>

namespace cumbia {

// Bad input data: malformed files, non-finite entries, inconsistent labels.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is outside its admissible range.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An internal numerical contract was broken (e.g. an SVD inconsistent with its input).
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace cumbia
