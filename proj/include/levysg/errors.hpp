#pragma once

#include <stdexcept>
#include <string>

namespace levysg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symbol parameters outside their admissible domain.
class DescriptorInvalid : public Error {
 public:
  using Error::Error;
};

/// Derivative requested at (or numerically at) the origin of a symbol that is
/// not differentiable there.
class OriginSingularity : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A theorem hypothesis (coefficient bounds, sector condition, index ordering)
/// does not hold for the inputs.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class NearPole : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced while sampling a symbol or multiplier.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class CostGuardExceeded : public Error {
 public:
  using Error::Error;
};

/// exp(-tψ) would amplify some mode (Re ψ < 0 on the grid).
class Instability : public Error {
 public:
  using Error::Error;
};

class NearSpectrum : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace levysg
