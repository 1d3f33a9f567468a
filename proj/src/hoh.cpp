#include "levysg/hoh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace levysg {

namespace {

constexpr double kPoleFloor = 1e-12;
constexpr double kVanish = 1e-8;
constexpr double kGrowth = 10.0;

}  // namespace

// ---------------------------------------------------------------- ScalarField

ScalarField ScalarField::constant(double c) {
  ScalarField f;
  f.kind_ = Kind::Constant;
  f.c0_ = c;
  f.name_ = "constant";
  return f;
}

ScalarField ScalarField::identity() {
  ScalarField f = constant(1.0);
  f.name_ = "identity";
  return f;
}

ScalarField ScalarField::two_plus_sin() {
  ScalarField f;
  f.kind_ = Kind::TwoPlusSin;
  f.name_ = "2_plus_sin";
  return f;
}

ScalarField ScalarField::sin() {
  ScalarField f;
  f.kind_ = Kind::Sin;
  f.name_ = "sin";
  return f;
}

ScalarField ScalarField::linear(double offset, double slope) {
  ScalarField f;
  f.kind_ = slope == 0 ? Kind::Constant : Kind::Linear;
  f.c0_ = offset;
  f.c1_ = slope;
  f.name_ = "linear";
  return f;
}

ScalarField ScalarField::custom(std::string name, std::function<double(double)> fn) {
  ScalarField f;
  f.kind_ = Kind::Custom;
  f.name_ = std::move(name);
  f.fn_ = std::move(fn);
  return f;
}

ScalarField ScalarField::from_name(const std::string& name, double value, double slope) {
  if (name == "constant") return constant(value);
  if (name == "identity") return identity();
  if (name == "2_plus_sin") return two_plus_sin();
  if (name == "sin") return sin();
  if (name == "linear") {
    auto f = linear(value, slope);
    f.name_ = "linear";
    return f;
  }
  throw DescriptorInvalid("unknown coefficient field '" + name + "'");
}

double ScalarField::derivative(double x, int order) const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::Identity: return order == 0 ? c0_ : 0.0;
    case Kind::Linear:
      if (order == 0) return c0_ + c1_ * x;
      return order == 1 ? c1_ : 0.0;
    case Kind::TwoPlusSin:
    case Kind::Sin: {
      double base = kind_ == Kind::TwoPlusSin && order == 0 ? 2.0 : 0.0;
      switch (order % 4) {
        case 0: return base + std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
      }
    }
    case Kind::Custom: {
      if (order == 0) return fn_(x);
      auto g = [this](Freq p) -> cplx { return fn_(p[0]); };
      return finite_difference(g, Freq(&x, 1), MultiIndex{order}).real();
    }
  }
  return 0.0;
}

std::vector<std::string> coefficient_catalog() {
  return {"constant", "identity", "2_plus_sin", "sin", "linear"};
}

CoefficientField CoefficientField::constant(double sigma_value, double b_value, int dim) {
  CoefficientField c;
  c.dim = dim;
  c.sigma.assign(dim, ScalarField::constant(sigma_value));
  c.b.assign(dim, ScalarField::constant(b_value));
  c.c_lo = std::abs(sigma_value);
  c.c_hi = std::abs(sigma_value);
  return c;
}

CoefficientField CoefficientField::scalar(ScalarField sigma, ScalarField b, double c_lo, double c_hi) {
  CoefficientField c;
  c.dim = 1;
  c.sigma = {std::move(sigma)};
  c.b = {std::move(b)};
  c.c_lo = c_lo;
  c.c_hi = c_hi;
  return c;
}

bool CoefficientField::sigma_constant() const {
  return std::all_of(sigma.begin(), sigma.end(), [](const ScalarField& f) { return f.is_constant(); });
}
bool CoefficientField::b_constant() const {
  return std::all_of(b.begin(), b.end(), [](const ScalarField& f) { return f.is_constant(); });
}

// ------------------------------------------------------------ Hypothesis 1

std::vector<std::vector<double>> default_x_sample(int dim) {
  std::vector<std::vector<double>> out;
  if (dim == 1) {
    for (int i = 0; i <= 400; ++i) out.push_back({-10.0 + 20.0 * i / 400});
  } else {
    for (int i = 0; i <= 40; ++i)
      for (int j = 0; j <= 40; ++j) out.push_back({-10.0 + 0.5 * i, -10.0 + 0.5 * j});
  }
  return out;
}

namespace {

struct AxisStats {
  double lo = HUGE_VAL, hi = 0;
  std::vector<double> dsup;
  bool unbounded = false;
};

// Extremes of |f| and sup |f^(r)| over the sampled coordinates of one axis,
// with Brent refinement of the extremes and a dilation probe for growth.
AxisStats axis_stats(const ScalarField& f, const std::vector<double>& coords, int k) {
  AxisStats s;
  s.dsup.assign(k + 1, 0.0);
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    double v = std::abs(f(coords[i]));
    if (v < s.lo) { s.lo = v; imin = i; }
    if (v > s.hi) { s.hi = v; imax = i; }
    for (int r = 0; r <= k; ++r) s.dsup[r] = std::max(s.dsup[r], std::abs(f.derivative(coords[i], r)));
  }
  auto refine = [&](std::size_t i, double sign) {
    double a = coords[i > 0 ? i - 1 : i], b = coords[i + 1 < coords.size() ? i + 1 : i];
    if (!(b > a)) return sign * std::abs(f(coords[i]));
    auto r = boost::math::tools::brent_find_minima(
        [&](double x) { return sign * std::abs(f(x)); }, a, b, 40);
    return r.second;
  };
  s.lo = std::min(s.lo, refine(imin, 1.0));
  s.hi = std::max(s.hi, -refine(imax, -1.0));

  double base_hi = 0;
  std::vector<double> base_d(k + 1, 0.0);
  for (double x : coords) {
    base_hi = std::max(base_hi, std::abs(f(x)));
    for (int r = 0; r <= k; ++r) base_d[r] = std::max(base_d[r], std::abs(f.derivative(x, r)));
  }
  for (double dil : {10.0, 100.0}) {
    for (int r = 0; r <= k; ++r) {
      double m = 0;
      for (double x : coords) m = std::max(m, std::abs(f.derivative(dil * x, r)));
      if (m > kGrowth * std::max(base_d[r], 1e-300) && m > 1e-12) s.unbounded = true;
      if (!std::isfinite(m)) s.unbounded = true;
    }
  }
  return s;
}

std::vector<double> axis_coords(const std::vector<std::vector<double>>& xs, int axis) {
  std::set<double> u;
  for (const auto& p : xs) u.insert(p[axis]);
  return {u.begin(), u.end()};
}

}  // namespace

Hypothesis1Report check_hypothesis1(const CoefficientField& coeff, int k,
                                    const std::vector<std::vector<double>>& x_sample) {
  Hypothesis1Report rep;
  const auto xs = x_sample.empty() ? default_x_sample(coeff.dim) : x_sample;
  rep.sigma_derivative_sup.assign(k + 1, 0.0);
  rep.b_derivative_sup.assign(k + 1, 0.0);
  rep.c_lo = HUGE_VAL;
  rep.c_hi = 0;
  bool sigma_unbounded = false, b_unbounded = false;
  for (int a = 0; a < coeff.dim; ++a) {
    auto coords = axis_coords(xs, a);
    auto s = axis_stats(coeff.sigma.at(a), coords, k);
    rep.c_lo = std::min(rep.c_lo, s.lo);
    rep.c_hi = std::max(rep.c_hi, s.hi);
    for (int r = 0; r <= k; ++r) rep.sigma_derivative_sup[r] = std::max(rep.sigma_derivative_sup[r], s.dsup[r]);
    sigma_unbounded |= s.unbounded;
    if (!coeff.b.empty()) {
      auto sb = axis_stats(coeff.b.at(a), coords, k);
      for (int r = 0; r <= k; ++r) rep.b_derivative_sup[r] = std::max(rep.b_derivative_sup[r], sb.dsup[r]);
      b_unbounded |= sb.unbounded;
    }
  }
  rep.c_lo_vanishes = rep.c_lo < kVanish;
  rep.c_hi_unbounded = sigma_unbounded;
  if (sigma_unbounded) rep.c_hi = HUGE_VAL;
  if (rep.c_lo_vanishes) rep.messages.push_back("sigma vanishes on the sample (c_lo = 0)");
  if (sigma_unbounded) rep.messages.push_back("sigma or one of its derivatives grows without bound");
  if (b_unbounded) rep.messages.push_back("b or one of its derivatives grows without bound");
  const double tol = 1e-9;
  if (rep.c_lo + tol < coeff.c_lo || rep.c_hi > coeff.c_hi + tol) {
    rep.declared_bounds_ok = false;
    std::ostringstream os;
    os << "empirical sigma bounds [" << rep.c_lo << ", " << rep.c_hi << "] exceed declared ["
       << coeff.c_lo << ", " << coeff.c_hi << "]";
    rep.messages.push_back(os.str());
  }
  auto finite_all = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  rep.sigma_ok = !rep.c_lo_vanishes && !sigma_unbounded && rep.declared_bounds_ok &&
                 finite_all(rep.sigma_derivative_sup);
  rep.b_ok = !b_unbounded && finite_all(rep.b_derivative_sup);
  rep.pass = rep.sigma_ok && rep.b_ok;
  return rep;
}

// ---------------------------------------------------------------- HohSymbol

struct HohSymbol::Impl {
  enum class Variant { Composed, Function, Quotient };
  Variant variant = Variant::Function;
  int dim = 1;
  std::string name;
  bool x_indep = false;
  bool origin_singular = false;
  // Composed
  SymbolDescriptor base = SymbolDescriptor::unit();
  std::vector<ScalarField> coeff;
  // Function
  HohSymbol::Fn fn;
  // Quotient
  HohSymbol q, psi;
  cplx lambda = 0;

  cplx eval(Point x, Freq xi) const {
    switch (variant) {
      case Variant::Composed: {
        double y[4];
        for (int i = 0; i < dim; ++i) y[i] = coeff[i](x[i]) * xi[i];
        return eval_symbol(base, Freq(y, dim));
      }
      case Variant::Function: return fn(x, xi);
      case Variant::Quotient: {
        cplx den = lambda + psi(x, xi);
        if (std::abs(den) < kPoleFloor) {
          std::ostringstream os;
          os << "|lambda + psi| = " << std::abs(den) << " below 1e-12 at xi = " << xi[0];
          throw NearPole(os.str());
        }
        return q(x, xi) / den;
      }
    }
    return 0.0;
  }
};

HohSymbol HohSymbol::from_function(std::string name, int dim, Fn fn, bool x_independent) {
  auto impl = std::make_shared<Impl>();
  impl->variant = Impl::Variant::Function;
  impl->dim = dim;
  impl->name = std::move(name);
  impl->fn = std::move(fn);
  impl->x_indep = x_independent;
  return HohSymbol(impl);
}

int HohSymbol::dim() const { return impl_->dim; }
const std::string& HohSymbol::name() const { return impl_->name; }
bool HohSymbol::x_independent() const { return impl_->x_indep; }
bool HohSymbol::origin_singular() const { return impl_->origin_singular; }

cplx HohSymbol::operator()(Point x, Freq xi) const { return impl_->eval(x, xi); }
cplx HohSymbol::operator()(double x, double xi) const {
  return impl_->eval(Point(&x, 1), Freq(&xi, 1));
}

cplx HohSymbol::at_frequency(Freq xi) const {
  double zero[4] = {0, 0, 0, 0};
  return impl_->eval(Point(zero, impl_->dim), xi);
}

cplx HohSymbol::derivative(Point x, Freq xi, const MultiIndex& alpha, const MultiIndex& beta,
                           const DerivativeOptions& opt) const {
  const int d = impl_->dim;
  int kb = 0;
  for (int v : beta) kb += v;
  if (kb > 0) {
    if (impl_->x_indep) return 0.0;
    std::vector<double> xi_copy(xi.begin(), xi.end());
    MultiIndex zero(d, 0);
    auto g = [&](Freq xp) -> cplx {
      return derivative(xp, Freq(xi_copy.data(), d), alpha, zero, opt);
    };
    return finite_difference(g, x, beta, opt.step);
  }
  int ka = 0;
  for (int v : alpha) ka += v;
  if (ka == 0) return impl_->eval(x, xi);
  if (impl_->variant == Impl::Variant::Composed) {
    // Diagonal chain rule: ∂_ξ^α ψ(Cξ) = Π c_i^{α_i} (∂^α ψ)(Cξ).
    double y[4];
    double factor = 1;
    for (int i = 0; i < d; ++i) {
      double c = impl_->coeff[i](x[i]);
      y[i] = c * xi[i];
      factor *= std::pow(c, alpha[i]);
    }
    return factor * symbol_derivative(impl_->base, Freq(y, d), alpha, opt);
  }
  std::vector<double> xcopy(x.begin(), x.end());
  auto g = [&](Freq p) -> cplx { return impl_->eval(Point(xcopy.data(), d), p); };
  return finite_difference(g, xi, alpha, opt.step);
}

HohSymbol make_hoh_symbol(const SymbolDescriptor& base, const CoefficientField& coeff,
                          CoefficientRole role, const std::vector<std::vector<double>>& x_sample) {
  if (base.dim() != coeff.dim) throw DescriptorInvalid("symbol and coefficient dimensions differ");
  auto rep = check_hypothesis1(coeff, 2, x_sample);
  const bool ok = role == CoefficientRole::Sigma ? rep.sigma_ok : rep.b_ok;
  if (!ok) {
    std::string msg = "coefficient field fails the boundedness hypothesis";
    for (const auto& m : rep.messages) msg += "; " + m;
    throw HypothesisViolation(msg);
  }
  auto impl = std::make_shared<HohSymbol::Impl>();
  impl->variant = HohSymbol::Impl::Variant::Composed;
  impl->dim = base.dim();
  impl->base = base;
  impl->coeff = role == CoefficientRole::Sigma ? coeff.sigma : coeff.b;
  impl->x_indep = role == CoefficientRole::Sigma ? coeff.sigma_constant() : coeff.b_constant();
  impl->origin_singular = base.origin_singular();
  std::string cname;
  for (const auto& f : impl->coeff) cname += (cname.empty() ? "" : ",") + f.name();
  impl->name = base.name() + "(" + cname + ")";
  return HohSymbol(impl);
}

HohSymbol leading_composition_symbol(const HohSymbol& q_sym, const HohSymbol& psi_sym, cplx lambda) {
  if (q_sym.dim() != psi_sym.dim()) throw DescriptorInvalid("symbol dimensions differ");
  auto impl = std::make_shared<HohSymbol::Impl>();
  impl->variant = HohSymbol::Impl::Variant::Quotient;
  impl->dim = q_sym.dim();
  impl->q = q_sym;
  impl->psi = psi_sym;
  impl->lambda = lambda;
  impl->x_indep = q_sym.x_independent() && psi_sym.x_independent();
  impl->origin_singular = q_sym.origin_singular() || psi_sym.origin_singular();
  impl->name = "pi[" + q_sym.name() + "/" + psi_sym.name() + "]";
  return HohSymbol(impl);
}

}  // namespace levysg
