#include "levysg/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "levysg/fit.hpp"

namespace levysg {

namespace {

constexpr double kDegenerate = 1e-14;
constexpr double kReFloor = 1e-12;
constexpr double kImThreshold = 1e-8;
constexpr double kNegDefTol = -1e-10;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> directions(int d, int n_dir) {
  if (d == 1) return {{1.0}, {-1.0}};
  std::vector<std::vector<double>> out;
  for (int j = 0; j < n_dir; ++j) {
    double a = std::numbers::pi / 16 + 2 * std::numbers::pi * j / n_dir;
    out.push_back({std::cos(a), std::sin(a)});
  }
  return out;
}

int order_of(const MultiIndex& a) {
  int k = 0;
  for (int v : a) k += v;
  return k;
}

// Slope through per-block extreme points of |∂^α ψ| |ξ|^{|α|}.
double envelope_slope(const std::vector<double>& r, const std::vector<double>& v, double lo, bool upper,
                      double fallback) {
  std::map<int, std::pair<double, double>> best;  // block -> (r, value)
  for (std::size_t i = 0; i < r.size(); ++i) {
    int blk = static_cast<int>(std::floor(std::log2(r[i] / lo) + 1e-12));
    auto it = best.find(blk);
    if (it == best.end() || (upper ? v[i] > it->second.second : v[i] < it->second.second))
      best[blk] = {r[i], v[i]};
  }
  if (best.size() < 2) return fallback;
  std::vector<double> x, y;
  for (const auto& [b, p] : best) {
    x.push_back(p.first);
    y.push_back(p.second);
  }
  return fit_loglog(x, y).slope;
}

}  // namespace

std::vector<MultiIndex> multi_indices(int d, int k) {
  std::vector<MultiIndex> out;
  if (d == 1) {
    for (int i = 0; i <= k; ++i) out.push_back({i});
  } else {
    for (int t = 0; t <= k; ++t)
      for (int i = t; i >= 0; --i) out.push_back({i, t - i});
  }
  return out;
}

IndexReport estimate_bg_index(const SymbolDescriptor& desc, int k, const IndexOptions& opt) {
  if (!(opt.window_hi > opt.window_lo && opt.window_lo >= 1))
    throw DescriptorInvalid("index window must satisfy hi > lo >= 1");
  if (opt.n_points < 4) throw DescriptorInvalid("index estimation needs >= 4 radii");
  const int d = desc.dim();
  const auto dirs = directions(d, opt.n_directions);
  const auto radii = logspace(opt.window_lo, opt.window_hi, opt.n_points);

  IndexReport rep;
  rep.order = k;
  rep.window_lo = opt.window_lo;
  rep.window_hi = opt.window_hi;
  rep.s = rep.s_plus = rep.s_minus = kNegInf;

  for (const auto& al : multi_indices(d, k)) {
    const int ka = order_of(al);
    AlphaFit fit;
    fit.alpha = al;
    std::vector<double> lr, lv, rr, env;
    std::vector<double> dir_slopes;
    for (const auto& dir : dirs) {
      std::vector<double> dr, dv;
      for (double r : radii) {
        std::vector<double> xi(d);
        for (int i = 0; i < d; ++i) xi[i] = r * dir[i];
        double v = std::abs(symbol_derivative(desc, Freq(xi.data(), d), al, opt.derivative));
        if (!(v >= kDegenerate) || !std::isfinite(v)) continue;
        dr.push_back(r);
        dv.push_back(v);
        rr.push_back(r);
        env.push_back(v * std::pow(r, ka));
      }
      if (dr.size() >= 2) dir_slopes.push_back(fit_loglog(dr, dv).slope);
      for (std::size_t i = 0; i < dr.size(); ++i) {
        lr.push_back(dr[i]);
        lv.push_back(dv[i]);
      }
    }
    if (lr.size() < 2) {
      fit.exponent = fit.exponent_plus = fit.exponent_minus = kNegInf;
      rep.per_alpha.push_back(fit);
      continue;
    }
    auto lf = fit_loglog(lr, lv);
    fit.exponent = lf.slope + ka;
    fit.residual = lf.rms_residual;
    fit.unreliable = fit.residual > 0.1;
    if (!dir_slopes.empty()) {
      auto [mn, mx] = std::minmax_element(dir_slopes.begin(), dir_slopes.end());
      fit.direction_spread = *mx - *mn;
    }
    fit.exponent_plus = envelope_slope(rr, env, opt.window_lo, true, fit.exponent);
    fit.exponent_minus = envelope_slope(rr, env, opt.window_lo, false, fit.exponent);
    rep.unreliable |= fit.unreliable;
    rep.s = std::max(rep.s, fit.exponent);
    rep.s_plus = std::max(rep.s_plus, fit.exponent_plus);
    rep.s_minus = std::max(rep.s_minus, fit.exponent_minus);
    rep.per_alpha.push_back(fit);
  }
  return rep;
}

FrequencySample FrequencySample::log_radial(int dim, double lo, double hi, int n_radii) {
  FrequencySample s;
  for (double r : logspace(lo, hi, n_radii))
    for (const auto& dir : directions(dim, 8)) {
      std::vector<double> p(dim);
      for (int i = 0; i < dim; ++i) p[i] = r * dir[i];
      s.points.push_back(p);
    }
  std::ostringstream os;
  os << "log-radial |xi| in [" << lo << ", " << hi << "], " << n_radii << " radii, "
     << (dim == 1 ? 2 : 8) << " directions";
  s.description = os.str();
  return s;
}

SectorReport sector_kappa(const SymbolDescriptor& desc, const FrequencySample& sample, double omega) {
  SectorReport rep;
  rep.omega = omega;
  rep.grid = sample.description;
  double kappa = 0;
  for (const auto& p : sample.points) {
    cplx v = eval_symbol(desc, Freq(p.data(), p.size()));
    double re = v.real() + omega;
    double im = std::abs(v.imag());
    if (re <= kReFloor) {
      if (im > kImThreshold) {
        rep.sectorial = false;
        break;
      }
      continue;  // numerically zero symbol value
    }
    kappa = std::max(kappa, im / std::max(re, kReFloor));
  }
  if (!rep.sectorial) {
    rep.kappa = std::numeric_limits<double>::infinity();
    rep.theta = std::numeric_limits<double>::quiet_NaN();
    rep.resolvent_angle = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.kappa = kappa;
  rep.theta = std::atan(kappa);
  rep.resolvent_angle = std::numbers::pi / 2 - rep.theta;
  return rep;
}

NegDefReport check_negative_definite(const SymbolDescriptor& desc,
                                     const std::vector<std::vector<double>>& pts) {
  const int m = static_cast<int>(pts.size());
  if (m < 2 || m > 64) throw DescriptorInvalid("negative-definiteness test needs 2..64 points");
  const int d = desc.dim();
  std::vector<cplx> psi(m);
  for (int j = 0; j < m; ++j) psi[j] = eval_symbol(desc, Freq(pts[j].data(), d));
  Eigen::MatrixXcd M(m, m);
  std::vector<double> diff(d);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < d; ++i) diff[i] = pts[j][i] - pts[k][i];
      M(j, k) = psi[j] + std::conj(psi[k]) - eval_symbol(desc, Freq(diff.data(), d));
    }
  Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  NegDefReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.negative_definite = rep.min_eigenvalue >= kNegDefTol;
  return rep;
}

SmallXiReport check_small_xi_growth(const SymbolDescriptor& desc, double gamma, int k, double ceiling) {
  if (!(gamma > 0)) throw DescriptorInvalid("gamma must be positive");
  SmallXiReport rep;
  rep.ceiling = ceiling;
  const int d = desc.dim();
  const auto sample = FrequencySample::log_radial(d, rep.radius_floor, 1.0, 121);
  for (const auto& al : multi_indices(d, k)) {
    const int ka = order_of(al);
    for (const auto& p : sample.points) {
      double r = 0;
      for (double v : p) r += v * v;
      r = std::sqrt(r);
      cplx v = symbol_derivative(desc, Freq(p.data(), d), al);
      double val = std::pow(r, ka - gamma) * std::abs(v);
      if (!std::isfinite(val)) val = std::numeric_limits<double>::infinity();
      rep.sup = std::max(rep.sup, val);
    }
  }
  rep.bounded = rep.sup <= ceiling;
  rep.note = "radii below 1e-6 excluded";
  return rep;
}

HohClassReport check_hoh_class(const HohSymbol& h, double m, double rho, double delta, int k,
                               const HohClassOptions& opt) {
  const int d = h.dim();
  auto xs = opt.x_sample;
  if (xs.empty()) {
    const double pi = std::numbers::pi;
    if (d == 1) {
      for (int i = 0; i <= 16; ++i) xs.push_back({-pi + 2 * pi * i / 16});
    } else {
      for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) xs.push_back({-pi + 2 * pi * i / 8, -pi + 2 * pi * j / 8});
    }
  }
  const auto small = FrequencySample::log_radial(d, opt.small_lo, 1.0, opt.n_radii);
  const auto large = FrequencySample::log_radial(d, 1.0, opt.large_hi, opt.n_radii);
  HohClassReport rep;
  rep.ceiling = opt.ceiling;
  rep.member = true;
  const auto idx = multi_indices(d, k);
  for (const auto& al : idx) {
    const int ka = order_of(al);
    for (const auto& be : idx) {
      const int kb = order_of(be);
      HohClassEntry e;
      e.alpha = al;
      e.beta = be;
      for (const auto& x : xs) {
        double xn = 0;
        for (double v : x) xn += v * v;
        xn = std::sqrt(xn);
        for (const auto& p : small.points) {
          double r = 0;
          for (double v : p) r += v * v;
          r = std::sqrt(r);
          double val = std::abs(h.derivative(Point(x.data(), d), Freq(p.data(), d), al, be));
          e.small_xi_constant = std::max(e.small_xi_constant, val * std::pow(r, ka));
        }
        for (const auto& p : large.points) {
          double r = 0;
          for (double v : p) r += v * v;
          r = std::sqrt(r);
          double val = std::abs(h.derivative(Point(x.data(), d), Freq(p.data(), d), al, be));
          double br = std::sqrt(1 + (r + xn) * (r + xn));
          double bound = std::pow(br, m - rho * ka + delta * kb);
          e.large_xi_constant = std::max(e.large_xi_constant, val / bound);
        }
      }
      if (!(e.small_xi_constant <= opt.ceiling) || !(e.large_xi_constant <= opt.ceiling))
        rep.member = false;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

}  // namespace levysg
