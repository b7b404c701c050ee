#pragma once

#include <stdexcept>
#include <string>

namespace qrm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fock truncation too small for the requested construction.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// A closed form was evaluated outside the phase where it is defined.
// `critical()` is set when the point lies inside the guard band around lambda = 1.
class PhaseDomainError : public Error {
 public:
  explicit PhaseDomainError(const std::string& what, bool critical = false)
      : Error(what), critical_(critical) {}
  bool critical() const noexcept { return critical_; }

 private:
  bool critical_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A state violates a precondition such as unit norm.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrm
