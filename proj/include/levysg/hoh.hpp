#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "levysg/symbols.hpp"

namespace levysg {

using Point = std::span<const double>;

/// Scalar coefficient x -> f(x) from a fixed catalog, with derivatives.
class ScalarField {
 public:
  static ScalarField constant(double c);
  static ScalarField identity();
  static ScalarField two_plus_sin();
  static ScalarField sin();
  static ScalarField linear(double offset, double slope);
  static ScalarField custom(std::string name, std::function<double(double)> f);
  /// Catalog lookup: "constant" (needs value), "identity" (the identity
  /// matrix, i.e. 1), "2_plus_sin", "sin", "linear" (value + slope x).
  static ScalarField from_name(const std::string& name, double value = 1.0, double slope = 0.0);

  double operator()(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;
  const std::string& name() const { return name_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  double constant_value() const { return c0_; }

 private:
  enum class Kind { Constant, Identity, TwoPlusSin, Sin, Linear, Custom };
  Kind kind_ = Kind::Constant;
  std::string name_;
  double c0_ = 0, c1_ = 0;
  std::function<double(double)> fn_;
};

std::vector<std::string> coefficient_catalog();

/// Diagonal coefficients: sigma_ii(x) = sigma[i](x_i), likewise b.
struct CoefficientField {
  int dim = 1;
  std::vector<ScalarField> sigma;
  std::vector<ScalarField> b;
  double c_lo = 0.0;  // declared ellipticity bounds for sigma
  double c_hi = HUGE_VAL;

  static CoefficientField constant(double sigma_value, double b_value = 1.0, int dim = 1);
  static CoefficientField scalar(ScalarField sigma, ScalarField b, double c_lo, double c_hi);

  bool sigma_constant() const;
  bool b_constant() const;
};

enum class CoefficientRole { Sigma, B };

struct Hypothesis1Report {
  double c_lo = 0, c_hi = 0;
  bool c_lo_vanishes = false;
  bool c_hi_unbounded = false;
  std::vector<double> sigma_derivative_sup;  // index = order
  std::vector<double> b_derivative_sup;
  bool declared_bounds_ok = true;
  bool sigma_ok = false;  // ellipticity, boundedness, bounded derivatives
  bool b_ok = false;      // boundedness and bounded derivatives
  bool pass = false;
  std::vector<std::string> messages;
};

Hypothesis1Report check_hypothesis1(const CoefficientField& coeff, int k,
                                    const std::vector<std::vector<double>>& x_sample);
/// Default sample: 401 points on [-10, 10] per axis (tensor grid of 41^2 in d = 2).
std::vector<std::vector<double>> default_x_sample(int dim);

/// State-dependent symbol a(x, ξ).  Shared, immutable, safe to evaluate concurrently.
class HohSymbol {
 public:
  struct Impl;
  using Fn = std::function<cplx(Point, Freq)>;

  HohSymbol() = default;
  explicit HohSymbol(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  /// Symbol given directly as a function of (x, ξ); derivatives by finite differences.
  static HohSymbol from_function(std::string name, int dim, Fn fn, bool x_independent = false);

  int dim() const;
  const std::string& name() const;
  cplx operator()(Point x, Freq xi) const;
  cplx operator()(double x, double xi) const;
  /// ∂_ξ^α ∂_x^β a(x, ξ).
  cplx derivative(Point x, Freq xi, const MultiIndex& alpha, const MultiIndex& beta,
                  const DerivativeOptions& opt = {}) const;
  /// True when a does not depend on x.
  bool x_independent() const;
  /// For x-independent symbols: a(·, ξ).
  cplx at_frequency(Freq xi) const;
  bool origin_singular() const;

  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// a(x, ξ) = ψ(coeffᵀ(x) ξ).  Runs check_hypothesis1 on the role's field and
/// throws HypothesisViolation if it fails.
HohSymbol make_hoh_symbol(const SymbolDescriptor& base, const CoefficientField& coeff,
                          CoefficientRole role = CoefficientRole::Sigma,
                          const std::vector<std::vector<double>>& x_sample = {});

/// π(x, ξ, λ) = q(bᵀξ) / (λ + ψ(σᵀξ)); evaluation throws NearPole if the
/// denominator is below 1e-12.
HohSymbol leading_composition_symbol(const HohSymbol& q_sym, const HohSymbol& psi_sym, cplx lambda);

}  // namespace levysg
