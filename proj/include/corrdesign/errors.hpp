#pragma once

#include <stdexcept>
#include <string>

namespace corrdesign {

// Invalid parameters, malformed configuration, incompatible inputs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation outside the declared design space.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Failures of the numerics: singular matrices, quadrature that does not
// settle, rejected update steps.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NearSingularError : public NumericalError {
 public:
  NearSingularError(const std::string& what, double condition)
      : NumericalError(what + " (condition number " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class SingularDiagonalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SmoothingRequiredError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class StepRejectedError : public NumericalError {
 public:
  StepRejectedError(const std::string& what, double psi)
      : NumericalError(what), psi_(psi) {}
  double psi() const { return psi_; }

 private:
  double psi_;
};

class KernelNotPsdError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace corrdesign
