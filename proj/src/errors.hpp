#pragma once

#include <stdexcept>
#include <string>

namespace bqpe {

// Malformed prior/state spec strings or grid files.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical contract was violated (non-PSD gamma0, residual too large, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Bayes update against an outcome of (numerically) zero probability.
class DegeneratePosteriorError : public std::runtime_error {
 public:
  explicit DegeneratePosteriorError(const std::string& what)
      : std::runtime_error(what) {}
};

// Operation outside its supported domain (e.g. adaptive probes with n != 1).
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bqpe
