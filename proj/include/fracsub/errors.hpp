#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracsub {

// Out-of-range or otherwise invalid argument to an operation.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller data that cannot be used (non-finite samples, malformed tables).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cache or table is too small for the requested work.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature or series evaluation failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reference distribution handed to a goodness-of-fit test is not a density.
class ReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Monte Carlo run had to discard too many replicates.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration failed validation; carries one diagnostic per offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics)
      : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& d : items) {
      if (!out.empty()) out += "; ";
      out += d;
    }
    return out;
  }
  std::vector<std::string> diagnostics_;
};

}  // namespace fracsub
