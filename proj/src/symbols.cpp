#include "levysg/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levysg/config.hpp"

namespace levysg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOriginGuard = 1e-8;
constexpr double kQuadTol = 1e-9;

double norm2(Freq xi) {
  double s = 0;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

int total_order(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

double falling(double a, int n) {
  double p = 1;
  for (int j = 0; j < n; ++j) p *= a - j;
  return p;
}

// log cosh z without overflow; the result is the principal logarithm when
// Re cosh z > 0, which holds for the Meixner argument.
cplx log_cosh(cplx z) {
  if (z.real() < 0) z = -z;
  return z + std::log(1.0 + std::exp(-2.0 * z)) - std::numbers::ln2;
}

cplx meixner_value(double m, double delta, double a, double b, double xi) {
  cplx z{a * xi / 2, -b / 2};
  return cplx{0, -m * xi} + 2 * delta * (log_cosh(z) - std::log(std::cos(b / 2)));
}

cplx nig_value(double m, double delta, double a, double b, double xi) {
  cplx bi{b, xi};
  cplx w = a * a - bi * bi;
  return cplx{0, -m * xi} + delta * (std::sqrt(w) - std::sqrt(a * a - b * b));
}

// |ξ|^p derivatives: any order in d = 1, up to order 2 in d = 2.
cplx power_derivative(double p, Freq xi, const MultiIndex& alpha) {
  const int k = total_order(alpha);
  if (xi.size() == 1) {
    double x = xi[0];
    double s = x < 0 ? -1.0 : 1.0;
    double v = falling(p, k) * std::pow(std::abs(x), p - k);
    return (k % 2 == 1) ? s * v : v;
  }
  double r = norm2(xi);
  if (k == 0) return std::pow(r, p);
  if (k == 1) {
    int i = alpha[0] == 1 ? 0 : 1;
    return p * std::pow(r, p - 2) * xi[i];
  }
  int i, j;
  if (alpha[0] == 2) { i = 0; j = 0; }
  else if (alpha[1] == 2) { i = 1; j = 1; }
  else { i = 0; j = 1; }
  double v = p * (p - 2) * std::pow(r, p - 4) * xi[i] * xi[j];
  if (i == j) v += p * std::pow(r, p - 2);
  return v;
}

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> coeffs;
  int power;
};

Stencil stencil(int k) {
  switch (k) {
    case 1: return {{-1, 1}, {-0.5, 0.5}, 1};
    case 2: return {{-1, 0, 1}, {1, -2, 1}, 2};
    case 3: return {{-2, -1, 1, 2}, {-0.5, 1, -1, 0.5}, 3};
    case 4: return {{-2, -1, 0, 1, 2}, {1, -4, 6, -4, 1}, 4};
    default: throw UnsupportedOrder("finite differences support order <= 4 per axis");
  }
}

cplx fd_rec(const std::function<cplx(Freq)>& f, std::vector<double>& pt, const MultiIndex& alpha,
            std::size_t axis, double base) {
  if (axis == alpha.size()) return f(Freq(pt.data(), pt.size()));
  int k = alpha[axis];
  if (k == 0) return fd_rec(f, pt, alpha, axis + 1, base);
  const double x0 = pt[axis];
  double h = base * std::max(std::abs(x0), 1.0);
  volatile double xp = x0 + h;
  h = xp - x0;
  Stencil s = stencil(k);
  cplx acc = 0;
  for (std::size_t j = 0; j < s.offsets.size(); ++j) {
    pt[axis] = x0 + s.offsets[j] * h;
    acc += s.coeffs[j] * fd_rec(f, pt, alpha, axis + 1, base);
  }
  pt[axis] = x0;
  return acc / std::pow(h, s.power);
}

// Real and imaginary parts integrated separately.
template <class F>
cplx ts_integrate(F&& f, double lo, double hi, double& err) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double e1 = 0, e2 = 0, l1;
  double re = ts.integrate([&](double y) { return f(y).real(); }, lo, hi, 1e-12, &e1, &l1);
  double im = ts.integrate([&](double y) { return f(y).imag(); }, lo, hi, 1e-12, &e2, &l1);
  err += e1 * std::max(1.0, std::abs(re)) + e2 * std::max(1.0, std::abs(im));
  return {re, im};
}

template <class F>
cplx gk_integrate(F&& f, double lo, double hi, double& err) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double e1 = 0, e2 = 0;
  double re = GK::integrate([&](double y) { return f(y).real(); }, lo, hi, 20, 1e-12, &e1);
  double im = GK::integrate([&](double y) { return f(y).imag(); }, lo, hi, 20, 1e-12, &e2);
  // Boost reports the error of the rule mapped to [-1, 1].
  err += (e1 + e2) * (hi - lo) / 2;
  return {re, im};
}

double gk_real(const std::function<double(double)>& f, double lo, double hi, double& err) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double e = 0;
  double v = GK::integrate(f, lo, hi, 15, 1e-13, &e);
  err += e * (hi - lo) / 2;
  return v;
}

// ∫_start^∞ f for f = trig(ξt)·ν(t) with ν monotone: the blocks between
// consecutive zeros (spacing `half`) alternate in sign, so partial sums are
// accelerated by repeated averaging.
double oscillatory_tail(const std::function<double(double)>& f, double start, double first_zero,
                        double half, double& err) {
  double head = first_zero > start ? gk_real(f, start, first_zero, err) : 0.0;
  constexpr int kWindow = 20;
  std::vector<double> partial;
  double sum = 0, z = first_zero;
  auto averaged = [&](std::size_t last) {
    std::vector<double> w(partial.begin() + (last + 1 - kWindow), partial.begin() + last + 1);
    for (int r = 1; r < kWindow; ++r)
      for (int j = 0; j + r < kWindow; ++j) w[j] = 0.5 * (w[j] + w[j + 1]);
    return w[0];
  };
  for (int blocks = 64; blocks <= (1 << 16); blocks *= 2) {
    while (static_cast<int>(partial.size()) < blocks) {
      sum += gk_real(f, z, z + half, err);
      z += half;
      partial.push_back(sum);
    }
    double a = averaged(partial.size() - 1), b = averaged(partial.size() - 2);
    if (std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a))) {
      err += std::abs(a - b);
      return head + a;
    }
  }
  throw IntegrationFailure("Levy-Khintchine tail did not converge", std::abs(partial.back()));
}

cplx lk_density_1d(const LevyTriplet& tr, double xi) {
  const auto& nu = tr.density;
  const double R = tr.support_radius;
  auto nu_s = [&](double y) { return nu(y) + nu(-y); };
  auto nu_a = [&](double y) { return nu(y) - nu(-y); };
  if (xi == 0) return 0.0;
  const double ax = std::abs(xi);
  const double half = kPi / ax;
  double err = 0;

  auto inner = [&](double y) {
    double u = xi * y;
    double s = std::sin(u / 2);
    double odd = std::abs(u) < 1e-3 ? u * u * u / 6 - std::pow(u, 5) / 120 : u - std::sin(u);
    double ns = nu_s(y), na = nu_a(y);
    // The density may overflow at the quadrature's smallest abscissae, where
    // the compensated integrand is below any tolerance.
    if (!std::isfinite(ns) || !std::isfinite(na)) return cplx{0, 0};
    double re = 2 * s * s * ns, im = odd * na;
    return cplx{std::isfinite(re) ? re : 0.0, std::isfinite(im) ? im : 0.0};
  };
  const double r1 = std::min(1.0, R);
  const double y0 = std::min(r1, half);
  cplx total = ts_integrate(inner, 0.0, y0, err);
  // Beyond the first half period the integrand is smooth and oscillatory.
  for (double y = y0; y < r1; y += half) total += gk_integrate(inner, y, std::min(r1, y + half), err);

  if (R > 1) {
    auto outer = [&](double y) {
      double u = xi * y;
      return cplx{(1 - std::cos(u)) * nu_s(y), -std::sin(u) * nu_a(y)};
    };
    if (std::isfinite(R)) {
      for (double y = 1.0; y < R; y += half) total += gk_integrate(outer, y, std::min(R, y + half), err);
    } else {
      boost::math::quadrature::exp_sinh<double> es;
      double e = 0;
      double mass = es.integrate(nu_s, 1.0, HUGE_VAL, 1e-12, &e);
      err += e * std::max(1.0, mass);
      // Zeros of cos(ξt) sit at (k + 1/2)π/|ξ|, those of sin(ξt) at kπ/|ξ|.
      double zc = (std::ceil(ax / kPi - 0.5) + 0.5) * half;
      double zs = std::ceil(ax / kPi) * half;
      double c = oscillatory_tail([&](double t) { return std::cos(xi * t) * nu_s(t); }, 1.0, zc, half, err);
      double sn = oscillatory_tail([&](double t) { return std::sin(xi * t) * nu_a(t); }, 1.0, zs, half, err);
      total += cplx{mass - c, -sn};
    }
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag()) ||
      err > std::max(kQuadTol, 1e-10 * std::abs(total)))
    throw IntegrationFailure("Levy-Khintchine quadrature did not reach tolerance", err);
  return total;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw DescriptorInvalid(msg);
}

}  // namespace

const char* kind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::AlphaStable: return "alpha_stable";
    case SymbolKind::Brownian: return "brownian";
    case SymbolKind::Meixner: return "meixner";
    case SymbolKind::NIG: return "nig";
    case SymbolKind::SubordinatedDrift: return "subordinated_drift";
    case SymbolKind::LevyKhintchine: return "levy_khintchine";
    case SymbolKind::Custom: return "custom";
  }
  return "unknown";
}

SymbolDescriptor SymbolDescriptor::alpha_stable(double alpha, int dim) {
  SymbolDescriptor d;
  d.kind_ = SymbolKind::AlphaStable;
  d.dim_ = dim;
  d.alpha_ = alpha;
  d.power_ = alpha;
  d.name_ = "alpha_stable";
  d.origin_singular_ = true;
  d.real_symmetric_ = true;
  d.validate();
  return d;
}

SymbolDescriptor SymbolDescriptor::brownian(int dim) {
  SymbolDescriptor d;
  d.kind_ = SymbolKind::Brownian;
  d.dim_ = dim;
  d.power_ = 2;
  d.name_ = "brownian";
  d.real_symmetric_ = true;
  d.validate();
  return d;
}

SymbolDescriptor SymbolDescriptor::meixner(double m, double delta, double a, double b) {
  SymbolDescriptor d;
  d.kind_ = SymbolKind::Meixner;
  d.m_ = m;
  d.delta_ = delta;
  d.a_ = a;
  d.b_ = b;
  d.name_ = "meixner";
  d.real_symmetric_ = (m == 0 && b == 0);
  d.validate();
  return d;
}

SymbolDescriptor SymbolDescriptor::nig(double m, double delta, double a, double b) {
  SymbolDescriptor d;
  d.kind_ = SymbolKind::NIG;
  d.m_ = m;
  d.delta_ = delta;
  d.a_ = a;
  d.b_ = b;
  d.name_ = "nig";
  d.validate();
  return d;
}

SymbolDescriptor SymbolDescriptor::subordinated_drift(double alpha) {
  SymbolDescriptor d;
  d.kind_ = SymbolKind::SubordinatedDrift;
  d.alpha_ = alpha;
  d.name_ = "subordinated_drift";
  d.origin_singular_ = true;
  d.validate();
  return d;
}

SymbolDescriptor SymbolDescriptor::levy_khintchine(LevyTriplet triplet) {
  SymbolDescriptor d;
  d.kind_ = SymbolKind::LevyKhintchine;
  d.dim_ = triplet.dim;
  d.name_ = "levy_khintchine";
  if (triplet.drift.empty()) triplet.drift.assign(triplet.dim, 0.0);
  if (triplet.Q.empty()) triplet.Q.assign(triplet.dim * triplet.dim, 0.0);
  d.triplet_ = std::make_shared<const LevyTriplet>(std::move(triplet));
  d.validate();
  levy_integrability(*d.triplet_);
  return d;
}

SymbolDescriptor SymbolDescriptor::drift() {
  LevyTriplet t;
  t.dim = 1;
  t.drift = {-1.0};
  auto d = levy_khintchine(std::move(t));
  d.name_ = "drift";
  return d;
}

SymbolDescriptor SymbolDescriptor::custom(std::string name, int dim, SymbolFn fn,
                                          bool origin_singular, bool real_symmetric) {
  SymbolDescriptor d;
  d.kind_ = SymbolKind::Custom;
  d.dim_ = dim;
  d.name_ = std::move(name);
  d.fn_ = std::move(fn);
  d.origin_singular_ = origin_singular;
  d.real_symmetric_ = real_symmetric;
  d.validate();
  return d;
}

SymbolDescriptor SymbolDescriptor::tabulated(std::string name, std::vector<double> radii,
                                             std::vector<cplx> values) {
  require(radii.size() >= 2 && radii.size() == values.size(),
          "tabulated symbol needs >= 2 matching radii and values");
  require(std::is_sorted(radii.begin(), radii.end()) && radii.front() >= 0,
          "tabulated radii must be nonnegative and increasing");
  auto r = std::make_shared<std::vector<double>>(std::move(radii));
  auto v = std::make_shared<std::vector<cplx>>(std::move(values));
  return custom(std::move(name), 1, [r, v](Freq xi) -> cplx {
    double x = norm2(xi);
    if (x <= r->front()) return v->front();
    if (x >= r->back()) return v->back();
    auto it = std::upper_bound(r->begin(), r->end(), x);
    std::size_t j = static_cast<std::size_t>(it - r->begin());
    double w = (x - (*r)[j - 1]) / ((*r)[j] - (*r)[j - 1]);
    return (1 - w) * (*v)[j - 1] + w * (*v)[j];
  });
}

SymbolDescriptor SymbolDescriptor::power(double s, int dim) {
  require(s > 0 && std::isfinite(s), "power exponent must be positive");
  auto d = custom("power", dim, [s](Freq xi) -> cplx { return std::pow(norm2(xi), s); },
                  std::abs(s - 2) > 0 && std::abs(s - 4) > 0, true);
  d.power_ = s;
  return d;
}

SymbolDescriptor SymbolDescriptor::bracket(double r, int dim) {
  return custom("bracket", dim, [r](Freq xi) -> cplx {
    double s = 1;
    for (double v : xi) s += v * v;
    return std::pow(s, r / 2);
  }, false, true);
}

SymbolDescriptor SymbolDescriptor::unit(int dim) {
  return custom("unit", dim, [](Freq) -> cplx { return 1.0; }, false, true);
}

SymbolDescriptor SymbolDescriptor::scaled(const SymbolDescriptor& base, double c) {
  require(c > 0 && std::isfinite(c), "scale must be positive");
  auto b = std::make_shared<SymbolDescriptor>(base);
  const int dim = base.dim();
  auto d = custom(base.name() + "_scaled", dim, [b, c, dim](Freq xi) -> cplx {
    double buf[4];
    for (int i = 0; i < dim; ++i) buf[i] = c * xi[i];
    return eval_symbol(*b, Freq(buf, dim));
  }, base.origin_singular(), base.real_symmetric());
  d.scale_base_ = b;
  d.scale_ = c;
  return d;
}

void SymbolDescriptor::validate() const {
  require(dim_ >= 1 && dim_ <= 4, "dimension must be in 1..4");
  switch (kind_) {
    case SymbolKind::AlphaStable:
      require(alpha_ > 0 && alpha_ < 2, "alpha_stable requires alpha in (0, 2)");
      break;
    case SymbolKind::Brownian:
      break;
    case SymbolKind::Meixner:
      require(dim_ == 1, "meixner is one-dimensional");
      require(std::isfinite(m_), "meixner requires finite m");
      require(delta_ > 0, "meixner requires delta > 0");
      require(a_ > 0, "meixner requires a > 0");
      require(b_ > -kPi && b_ < kPi, "meixner requires b in (-pi, pi)");
      break;
    case SymbolKind::NIG:
      require(dim_ == 1, "nig is one-dimensional");
      require(std::isfinite(m_), "nig requires finite m");
      require(delta_ > 0, "nig requires delta > 0");
      require(std::abs(b_) > 0 && std::abs(b_) < a_, "nig requires 0 < |b| < a");
      break;
    case SymbolKind::SubordinatedDrift:
      require(dim_ == 1, "subordinated_drift is one-dimensional");
      require(alpha_ > 0 && alpha_ < 1, "subordinated_drift requires alpha in (0, 1)");
      break;
    case SymbolKind::LevyKhintchine: {
      const auto& t = *triplet_;
      require(t.drift.size() == static_cast<std::size_t>(t.dim), "drift length must equal dim");
      require(t.Q.size() == static_cast<std::size_t>(t.dim * t.dim), "Q must be dim x dim");
      Eigen::MatrixXd Q(t.dim, t.dim);
      for (int i = 0; i < t.dim; ++i)
        for (int j = 0; j < t.dim; ++j) Q(i, j) = t.Q[i * t.dim + j];
      require((Q - Q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1 + Q.cwiseAbs().maxCoeff()),
              "Q must be symmetric");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
      require(es.eigenvalues().minCoeff() >= -1e-12 * (1 + Q.cwiseAbs().maxCoeff()),
              "Q must be positive semidefinite");
      require(!t.density || t.dim == 1, "density-form Levy measures are supported for d = 1 only");
      for (const auto& at : t.atoms) {
        require(at.jump.size() == static_cast<std::size_t>(t.dim), "atom jump length must equal dim");
        require(at.rate >= 0 && std::isfinite(at.rate), "atom rates must be nonnegative");
      }
      require(t.support_radius > 0, "support radius must be positive");
      break;
    }
    case SymbolKind::Custom:
      require(static_cast<bool>(fn_), "custom symbol needs a callable");
      break;
  }
}

cplx eval_symbol(const SymbolDescriptor& d, Freq xi) {
  if (static_cast<int>(xi.size()) != d.dim())
    throw DescriptorInvalid("frequency has dimension " + std::to_string(xi.size()) +
                            ", symbol expects " + std::to_string(d.dim()));
  bool origin = true;
  for (double v : xi) {
    if (!std::isfinite(v)) throw EvaluationError("non-finite frequency");
    if (v != 0) origin = false;
  }
  if (origin && d.kind() != SymbolKind::Custom) return 0.0;
  switch (d.kind()) {
    case SymbolKind::AlphaStable: {
      if (xi.size() == 1) return std::pow(std::abs(xi[0]), d.alpha());
      return std::pow(norm2(xi), d.alpha());
    }
    case SymbolKind::Brownian: {
      double s = 0;
      for (double v : xi) s += v * v;
      return s;
    }
    case SymbolKind::Meixner: return meixner_value(d.m(), d.delta(), d.a(), d.b(), xi[0]);
    case SymbolKind::NIG: return nig_value(d.m(), d.delta(), d.a(), d.b(), xi[0]);
    case SymbolKind::SubordinatedDrift: return std::pow(cplx{0, xi[0]}, d.alpha());
    case SymbolKind::LevyKhintchine: return levy_khintchine_eval(*d.triplet(), xi);
    case SymbolKind::Custom: return d.fn()(xi);
  }
  return 0.0;
}

cplx eval_symbol(const SymbolDescriptor& d, double xi) { return eval_symbol(d, Freq(&xi, 1)); }

bool has_closed_form_derivative(const SymbolDescriptor& d, const MultiIndex& alpha) {
  const int k = total_order(alpha);
  if (k == 0) return true;
  switch (d.kind()) {
    case SymbolKind::Brownian: return true;
    case SymbolKind::AlphaStable: return d.dim() == 1 || k <= 2;
    case SymbolKind::Meixner:
    case SymbolKind::NIG: return k <= 2;
    case SymbolKind::SubordinatedDrift: return true;
    case SymbolKind::Custom:
      if (d.scale_base()) return has_closed_form_derivative(*d.scale_base(), alpha);
      return d.power_exponent() > 0 && (d.dim() == 1 || k <= 2);
    default: return false;
  }
}

cplx finite_difference(const std::function<cplx(Freq)>& f, Freq at, const MultiIndex& alpha,
                       double step) {
  const int k = total_order(alpha);
  std::vector<double> pt(at.begin(), at.end());
  if (k == 0) return f(Freq(pt.data(), pt.size()));
  double base = k == 1 ? step : std::pow(step, 3.0 / (k + 2));
  return fd_rec(f, pt, alpha, 0, base);
}

cplx symbol_derivative(const SymbolDescriptor& d, Freq xi, const MultiIndex& alpha,
                       const DerivativeOptions& opt) {
  if (static_cast<int>(alpha.size()) != d.dim() || static_cast<int>(xi.size()) != d.dim())
    throw DescriptorInvalid("multi-index and frequency must match the symbol dimension");
  for (int a : alpha)
    if (a < 0) throw UnsupportedOrder("negative multi-index entry");
  const int k = total_order(alpha);
  if (k > opt.max_order)
    throw UnsupportedOrder("derivative order " + std::to_string(k) + " exceeds configured maximum " +
                           std::to_string(opt.max_order));
  if (k == 0) return eval_symbol(d, xi);
  if (d.origin_singular() && norm2(xi) < kOriginGuard)
    throw OriginSingularity("symbol '" + d.name() + "' is not differentiable at the origin");

  if (!opt.force_finite_difference && has_closed_form_derivative(d, alpha)) {
    switch (d.kind()) {
      case SymbolKind::Brownian: {
        if (k == 1) {
          for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] == 1) return 2 * xi[i];
        }
        if (k == 2) {
          for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] == 2) return 2.0;
        }
        return 0.0;
      }
      case SymbolKind::AlphaStable: return power_derivative(d.alpha(), xi, alpha);
      case SymbolKind::Meixner: {
        cplx z{d.a() * xi[0] / 2, -d.b() / 2};
        if (k == 1) return cplx{0, -d.m()} + d.delta() * d.a() * std::tanh(z);
        cplx c = std::cosh(z);
        return d.delta() * d.a() * d.a() / 2.0 / (c * c);
      }
      case SymbolKind::NIG: {
        cplx bi{d.b(), xi[0]};
        cplx w = d.a() * d.a() - bi * bi;
        cplx sw = std::sqrt(w);
        if (k == 1) return cplx{0, -d.m()} - cplx{0, d.delta()} * bi / sw;
        return d.delta() * d.a() * d.a() / (w * sw);
      }
      case SymbolKind::SubordinatedDrift: {
        const double a = d.alpha();
        cplx ik = std::pow(cplx{0, 1}, k);
        return falling(a, k) * ik * std::pow(cplx{0, xi[0]}, a - k);
      }
      case SymbolKind::Custom: {
        if (d.scale_base()) {
          const double c = d.scale();
          std::vector<double> y(xi.begin(), xi.end());
          for (auto& v : y) v *= c;
          return std::pow(c, k) * symbol_derivative(*d.scale_base(), Freq(y.data(), y.size()), alpha, opt);
        }
        return power_derivative(d.power_exponent(), xi, alpha);
      }
      default: break;
    }
  }
  return finite_difference([&d](Freq x) { return eval_symbol(d, x); }, xi, alpha, opt.step);
}

cplx symbol_derivative(const SymbolDescriptor& d, double xi, int order, const DerivativeOptions& opt) {
  return symbol_derivative(d, Freq(&xi, 1), MultiIndex{order}, opt);
}

cplx levy_khintchine_eval(const LevyTriplet& t, Freq xi) {
  const int d = t.dim;
  if (static_cast<int>(xi.size()) != d) throw DescriptorInvalid("frequency dimension mismatch");
  cplx psi = 0;
  // Empty drift or Q means zero.
  if (!t.drift.empty())
    for (int i = 0; i < d; ++i) psi += cplx{0, -t.drift[i] * xi[i]};
  double quad = 0;
  if (!t.Q.empty())
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) quad += xi[i] * t.Q[i * d + j] * xi[j];
  psi += 0.5 * quad;
  for (const auto& at : t.atoms) {
    double dot = 0, n2 = 0;
    for (int i = 0; i < d; ++i) {
      dot += xi[i] * at.jump[i];
      n2 += at.jump[i] * at.jump[i];
    }
    cplx term = 1.0 - std::exp(cplx{0, dot});
    if (n2 <= 1.0) term += cplx{0, dot};
    psi += at.rate * term;
  }
  if (t.density) psi += lk_density_1d(t, xi[0]);
  return psi;
}

double levy_integrability(const LevyTriplet& t) {
  double total = 0;
  for (const auto& at : t.atoms) {
    double n2 = 0;
    for (double v : at.jump) n2 += v * v;
    total += at.rate * n2 / (1 + n2);
  }
  if (t.density) {
    auto g = [&](double y) {
      double v = t.density(y) + t.density(-y);
      if (!std::isfinite(v)) return 0.0;
      double r = y * y / (1 + y * y) * v;
      return std::isfinite(r) ? r : 0.0;
    };
    double R = t.support_radius;
    try {
      boost::math::quadrature::tanh_sinh<double> ts;
      double err = 0, l1 = 0;
      double part = ts.integrate(g, 0.0, std::min(1.0, R), 1e-10, &err, &l1);
      if (err > 1e-6 * std::max(1.0, part)) total = HUGE_VAL;
      total += part;
      if (R > 1) {
        if (std::isfinite(R)) {
          total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 1.0, R, 15, 1e-10);
        } else {
          boost::math::quadrature::exp_sinh<double> es;
          part = es.integrate(g, 1.0, HUGE_VAL, 1e-10, &err, &l1);
          if (err > 1e-6 * std::max(1.0, part)) total = HUGE_VAL;
          total += part;
        }
      }
    } catch (const std::exception&) {
      total = HUGE_VAL;
    }
  }
  if (!std::isfinite(total))
    throw DescriptorInvalid("Levy measure fails the integrability condition");
  return total;
}

double stable_density_constant(double alpha) {
  if (!(alpha > 0 && alpha < 2)) throw DescriptorInvalid("stable index must be in (0, 2)");
  if (std::abs(alpha - 1) < 1e-12) return 1 / kPi;
  return alpha / (2 * boost::math::tgamma(1 - alpha) * std::cos(kPi * alpha / 2));
}

SymbolDescriptor subordinate(const SymbolDescriptor& desc, double alpha) {
  if (!(alpha > 0 && alpha < 1))
    throw DescriptorInvalid("subordination exponent must be in (0, 1)");
  const LevyTriplet* t = desc.triplet();
  bool is_drift = desc.kind() == SymbolKind::LevyKhintchine && t && t->dim == 1 &&
                  t->drift.size() == 1 && t->drift[0] == -1.0 && t->Q[0] == 0.0 &&
                  t->atoms.empty() && !t->density;
  if (!is_drift)
    throw DescriptorInvalid("subordination is implemented for the drift symbol i*xi only");
  return SymbolDescriptor::subordinated_drift(alpha);
}

SymbolDescriptor symbol_from_table(const Table& t, const std::string& key_prefix) {
  auto key = [&](const std::string& k) { return key_prefix.empty() ? k : key_prefix + "." + k; };
  std::string kind = t.string("kind");
  int dim = t.integer("dim", 1);
  try {
    if (kind == "alpha_stable") return SymbolDescriptor::alpha_stable(t.number("alpha"), dim);
    if (kind == "brownian") return SymbolDescriptor::brownian(dim);
    if (kind == "meixner")
      return SymbolDescriptor::meixner(t.number("m", 0.0), t.number("delta"), t.number("a"),
                                       t.number("b", 0.0));
    if (kind == "nig")
      return SymbolDescriptor::nig(t.number("m", 0.0), t.number("delta"), t.number("a"), t.number("b"));
    if (kind == "subordinated_drift") return SymbolDescriptor::subordinated_drift(t.number("alpha"));
    if (kind == "drift") return SymbolDescriptor::drift();
    if (kind == "power") return SymbolDescriptor::power(t.number("s"), dim);
    if (kind == "bracket") return SymbolDescriptor::bracket(t.number("r"), dim);
    if (kind == "unit") return SymbolDescriptor::unit(dim);
  } catch (const DescriptorInvalid& e) {
    throw ConfigError(key("kind"), e.what());
  }
  throw ConfigError(key("kind"), "unknown symbol kind '" + kind + "'");
}

SymbolDescriptor symbol_from_block(const std::string& text) {
  auto brace = text.find('{');
  if (brace == std::string::npos) throw ConfigError("symbol", "expected an inline table");
  Value v = parse_value_text(text.substr(brace));
  return symbol_from_table(v.as_table("symbol"), "symbol");
}

std::vector<std::string> symbol_catalog() {
  return {"alpha_stable", "brownian", "meixner", "nig", "subordinated_drift",
          "drift", "power", "bracket", "unit"};
}

}  // namespace levysg
