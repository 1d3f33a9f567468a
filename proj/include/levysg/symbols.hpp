#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "levysg/errors.hpp"

namespace levysg {

using cplx = std::complex<double>;
using Freq = std::span<const double>;
using MultiIndex = std::vector<int>;

enum class SymbolKind {
  AlphaStable,
  Brownian,
  Meixner,
  NIG,
  SubordinatedDrift,
  LevyKhintchine,
  Custom
};

const char* kind_name(SymbolKind k);

struct LevyAtom {
  std::vector<double> jump;
  double rate = 0.0;
};

// Drift, Gaussian part and jump measure.  The density form is one-dimensional
// and is read as ν(dy) = density(y) dy on y != 0, vanishing for |y| > support_radius.
// Beyond |y| = 1 the density is assumed nonincreasing in |y| (tail bound).
struct LevyTriplet {
  int dim = 1;
  std::vector<double> drift;
  std::vector<double> Q;  // row-major dim x dim
  std::function<double(double)> density;
  double support_radius = std::numeric_limits<double>::infinity();
  std::vector<LevyAtom> atoms;
};

using SymbolFn = std::function<cplx(Freq)>;

class SymbolDescriptor {
 public:
  static SymbolDescriptor alpha_stable(double alpha, int dim = 1);
  static SymbolDescriptor brownian(int dim = 1);
  static SymbolDescriptor meixner(double m, double delta, double a, double b);
  static SymbolDescriptor nig(double m, double delta, double a, double b);
  static SymbolDescriptor subordinated_drift(double alpha);
  static SymbolDescriptor levy_khintchine(LevyTriplet triplet);
  /// ψ(ξ) = iξ in d = 1, i.e. the triplet with drift -1.
  static SymbolDescriptor drift();
  static SymbolDescriptor custom(std::string name, int dim, SymbolFn fn,
                                 bool origin_singular = false,
                                 bool real_symmetric = false);
  /// Radial table |ξ| -> value, linear interpolation, clamped outside.
  static SymbolDescriptor tabulated(std::string name, std::vector<double> radii,
                                    std::vector<cplx> values);
  /// |ξ|^s for any s > 0.
  static SymbolDescriptor power(double s, int dim = 1);
  /// Peetre bracket <ξ>^r = (1 + |ξ|^2)^{r/2}.
  static SymbolDescriptor bracket(double r, int dim = 1);
  static SymbolDescriptor unit(int dim = 1);
  /// ξ -> ψ(c ξ).
  static SymbolDescriptor scaled(const SymbolDescriptor& base, double c);

  SymbolKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  double alpha() const { return alpha_; }
  double m() const { return m_; }
  double delta() const { return delta_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const LevyTriplet* triplet() const { return triplet_.get(); }
  const SymbolFn& fn() const { return fn_; }

  /// Not differentiable at ξ = 0.
  bool origin_singular() const { return origin_singular_; }
  /// Real-valued and even (no drift, no skew).
  bool real_symmetric() const { return real_symmetric_; }
  /// Pure power |ξ|^p, if so (p > 0), else 0.
  double power_exponent() const { return power_; }
  /// For scaled(): the base symbol and factor.
  const SymbolDescriptor* scale_base() const { return scale_base_.get(); }
  double scale() const { return scale_; }

  void validate() const;

 private:
  SymbolKind kind_ = SymbolKind::Custom;
  int dim_ = 1;
  std::string name_;
  double alpha_ = 0, m_ = 0, delta_ = 0, a_ = 0, b_ = 0;
  double power_ = 0;
  bool origin_singular_ = false;
  bool real_symmetric_ = false;
  double scale_ = 1;
  std::shared_ptr<const LevyTriplet> triplet_;
  std::shared_ptr<const SymbolDescriptor> scale_base_;
  SymbolFn fn_;
};

cplx eval_symbol(const SymbolDescriptor& desc, Freq xi);
cplx eval_symbol(const SymbolDescriptor& desc, double xi);

struct DerivativeOptions {
  double step = 1e-5;
  int max_order = 4;
  bool force_finite_difference = false;
};

cplx symbol_derivative(const SymbolDescriptor& desc, Freq xi, const MultiIndex& alpha,
                       const DerivativeOptions& opt = {});
cplx symbol_derivative(const SymbolDescriptor& desc, double xi, int order,
                       const DerivativeOptions& opt = {});
bool has_closed_form_derivative(const SymbolDescriptor& desc, const MultiIndex& alpha);

/// Central finite difference of an arbitrary function at a point, one stencil
/// per axis; step per axis is step^{3/(k+2)} * max(|x|, 1) for total order k.
cplx finite_difference(const std::function<cplx(Freq)>& f, Freq at, const MultiIndex& alpha,
                       double step = 1e-5);

cplx levy_khintchine_eval(const LevyTriplet& triplet, Freq xi);

/// ∫ |y|^2/(1+|y|^2) ν(dy); throws DescriptorInvalid if not finite.
double levy_integrability(const LevyTriplet& triplet);

/// Density constant c with ∫(1 - cos ξy) c|y|^{-1-α} dy = |ξ|^α.
double stable_density_constant(double alpha);

SymbolDescriptor subordinate(const SymbolDescriptor& desc, double alpha);

class Table;
SymbolDescriptor symbol_from_table(const Table& t, const std::string& key_prefix = "");
/// Parses `{ kind = "alpha_stable", alpha = 1.5, dim = 1 }` (the right-hand
/// side, optionally preceded by `name =`).
SymbolDescriptor symbol_from_block(const std::string& text);

std::vector<std::string> symbol_catalog();

}  // namespace levysg
