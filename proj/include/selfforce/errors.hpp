#pragma once

#include <stdexcept>
#include <string>

namespace selfforce {

// Argument outside the mathematical domain of an operation (negative radius,
// evaluation time outside an open interval, negative moment order, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A derivative of higher order than a trajectory can provide was requested.
class UnsupportedOrderError : public std::domain_error {
 public:
  explicit UnsupportedOrderError(const std::string& what)
      : std::domain_error(what) {}
};

// A truncated series failed to meet its tolerance within the allowed number
// of terms.  Carries the state of the accumulation at the point of failure.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int terms_used,
                   double truncation_estimate)
      : std::runtime_error(what),
        terms_used(terms_used),
        truncation_estimate(truncation_estimate) {}

  int terms_used;
  double truncation_estimate;
};

// Adaptive quadrature could not reach the requested absolute error target.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double error_estimate,
                  double error_target)
      : std::runtime_error(what),
        error_estimate(error_estimate),
        error_target(error_target) {}

  double error_estimate;
  double error_target;
};

// Malformed input file (trajectory descriptions, ...).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace selfforce
