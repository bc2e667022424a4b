#pragma once

#include <stdexcept>
#include <string>

namespace funtf {

// Caller handed us something structurally wrong: mismatched dimensions,
// out-of-tolerance inputs, broken preconditions.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to meet its accuracy contract (non-convergence,
// expected near-singularity absent, residual out of bound).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file content, with a 1-based position for diagnostics.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& what_)
      : std::runtime_error(what_), line(line_), column(column_) {}
};

// Filesystem trouble: unreadable input, unwritable output.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace funtf
