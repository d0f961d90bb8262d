#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberld {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature failed to reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

/// Observed lengths that violate the support of the data scale.
class DataError : public std::invalid_argument {
 public:
  DataError(const std::string& what, std::vector<std::size_t> offending)
      : std::invalid_argument(what), offending_(std::move(offending)) {}

  /// Zero-based indices of the offending values.
  const std::vector<std::size_t>& offending() const noexcept { return offending_; }

 private:
  std::vector<std::size_t> offending_;
};

}  // namespace fiberld
