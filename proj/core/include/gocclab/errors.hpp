#pragma once

#include <stdexcept>

namespace gocclab {

// Structured-text inputs (protocol files, state specs) that fail to parse.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric guard tripped: infeasible parameter window, truncation budget
// exceeded, symplectic/positivity check failure, and the like.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gocclab
