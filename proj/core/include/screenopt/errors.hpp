#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace screenopt {

// Input outside a documented domain: bad budget pair, quantile outside [0,1],
// malformed grid, distribution/solver mismatch.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Band mean requested over an interval carrying zero probability mass.
class DegenerateBandError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Quantity only defined under the contraction-regime hypotheses.
class RegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Operation needs a density or a continuous CDF the distribution lacks.
class UnsupportedDistributionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Root bracketing failed before bisection could start.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed-point iteration exhausted max_iter. Carries the iterate sequence so
// callers can still report the trace.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> rho_sequence)
      : std::runtime_error(what), rho_sequence_(std::move(rho_sequence)) {}

  const std::vector<double>& rho_sequence() const noexcept { return rho_sequence_; }

 private:
  std::vector<double> rho_sequence_;
};

// Exact enumeration would exceed the configured cap.
class EnumerationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; message carries file and line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, long line, const std::string& detail)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + detail) {}
  explicit ParseError(const std::string& detail) : std::runtime_error(detail) {}
};

}  // namespace screenopt
