#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Invalid physical or model input (negative frequency, rho2 < rho1, beta^2 >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// 4 lambda^2 + omega q == 0: delta is undefined, classify with critical_q instead.
class SingularParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dicke
