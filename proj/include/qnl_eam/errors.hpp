#pragma once

#include <stdexcept>
#include <string>

namespace qnl_eam {

/// Eigen-solve or factorization failure; `what()` carries the diagnostics.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The operator restricted to zero-mean displacements is not positive definite.
class NotPositiveDefinite : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A root bracket whose endpoints do not straddle a sign change.
class BracketError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed key-value input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace qnl_eam
