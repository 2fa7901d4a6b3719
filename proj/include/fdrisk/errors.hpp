#pragma once

#include <stdexcept>
#include <string>

namespace fdrisk {

/// Argument outside the mathematical domain of an operation (p <= 1, t < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The defining integral of a divergence diverges.
class DivergenceInfinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature did not meet its tolerance budget. Carries the best estimate reached.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// Invalid search or sweep configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fdrisk
