#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace infomarket {

/// Input rejected by a precondition (bad probability, length mismatch, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base of every numerical failure raised by the market solvers.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clearing price requested for a profile with no trade on one side.
class UndefinedPrice : public SolverError {
 public:
  using SolverError::SolverError;
};

namespace detail {

inline std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

/// A root-finding bracket did not change sign.
class BracketingFailure : public SolverError {
 public:
  BracketingFailure(const std::string& what, double lo_value, double hi_value)
      : SolverError(what + " (f(lo) = " + detail::short_number(lo_value) +
                    ", f(hi) = " + detail::short_number(hi_value) + ")"),
        lo_value_(lo_value),
        hi_value_(hi_value) {}

  double lo_value() const noexcept { return lo_value_; }
  double hi_value() const noexcept { return hi_value_; }

 private:
  double lo_value_;
  double hi_value_;
};

class ConvergenceFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace infomarket
