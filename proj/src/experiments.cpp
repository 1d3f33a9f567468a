#include "levysg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "levysg/fit.hpp"
#include "levysg/parallel.hpp"

namespace levysg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFitFlag = 0.05;
constexpr double kActive = 1e-13;  // modes with |û| below this fraction of max|û| are ignored

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

// ξ -> s(c ∘ ξ) with per-axis factors.
Multiplier diag_scaled(const SymbolDescriptor& s, const std::vector<double>& c) {
  bool unit = std::all_of(c.begin(), c.end(), [](double v) { return v == 1.0; });
  if (unit) return symbol_multiplier(s);
  return [s, c](Freq xi) {
    double y[2];
    for (std::size_t i = 0; i < xi.size(); ++i) y[i] = c[i] * xi[i];
    return eval_symbol(s, Freq(y, xi.size()));
  };
}

std::vector<double> constant_values(const std::vector<ScalarField>& f) {
  std::vector<double> out;
  for (const auto& s : f) out.push_back(s.constant_value());
  return out;
}

bool isotropic(const std::vector<double>& c) {
  return std::all_of(c.begin(), c.end(), [&](double v) { return v == c.front(); });
}

std::vector<bool> active_modes(const Field& hat) {
  double mx = 0;
  for (auto v : hat.values) mx = std::max(mx, std::abs(v));
  std::vector<bool> a(hat.values.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = !hat.grid.is_nyquist(i) && std::abs(hat.values[i]) > kActive * mx;
  return a;
}

std::vector<double> local_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> s(n, 0.0);
  if (n < 2) return s;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? n - 1 : i + 1;
    s[i] = (std::log(y[b]) - std::log(y[a])) / (std::log(x[b]) - std::log(x[a]));
  }
  return s;
}

// The MC engine needs a sampler; pure powers |ξ|^p with p <= 2 are stable laws.
SymbolDescriptor mc_driver(const SymbolDescriptor& psi) {
  switch (psi.kind()) {
    case SymbolKind::AlphaStable:
    case SymbolKind::Brownian:
    case SymbolKind::NIG: return psi;
    default: break;
  }
  const double p = psi.power_exponent();
  if (p > 0 && p < 2) return SymbolDescriptor::alpha_stable(p, psi.dim());
  if (p == 2) return SymbolDescriptor::brownian(psi.dim());
  throw ConfigError("psi", "symbol '" + psi.name() + "' has no exact increment sampler for the MC engine");
}

SectorReport grid_sector(const SymbolDescriptor& psi, const GridSpec& g) {
  return sector_kappa(psi, FrequencySample::log_radial(g.d, g.dxi(), std::max(g.xi_max(), 2 * g.dxi()), 61));
}

void not_sectorial(const SectorReport& s) {
  std::ostringstream os;
  os << "psi is not sectorial on " << s.grid << " (kappa = " << s.kappa
     << "); the smoothing estimate does not apply";
  throw HypothesisViolation(os.str());
}

// Grid gain of B P_t for x-independent coefficients: per-mode amplification.
void multiplier_path(const SmoothingSpec& spec, const Field& u, SmoothingResult& res) {
  const GridSpec& g = spec.grid;
  const auto cs = constant_values(spec.coeff.sigma);
  const auto cb = constant_values(spec.coeff.b);
  const auto psi_vals = multiplier_on_grid(diag_scaled(spec.psi, cs), g);
  const auto q_vals = multiplier_on_grid(diag_scaled(spec.q, cb), g);
  const Field hat = u.space == Space::Frequency ? u : fourier_forward(u);
  const auto active = active_modes(hat);
  const std::size_t nt = res.t_values.size();
  res.norms.assign(nt, 0);
  res.ratio.assign(nt, 0);
  std::vector<double> residuals(nt, 0);

  if (spec.engine == Engine::Multiplier) {
    for (std::size_t i = 0; i < psi_vals.size(); ++i)
      if (!g.is_nyquist(i) && psi_vals[i].real() < -1e-12)
        throw Instability("Re psi < 0 on the grid; exp(-t psi) would amplify");
  }
  if (spec.engine == Engine::Contour && !isotropic(cs))
    throw ConfigError("coefficients.sigma", "the contour engine needs the same constant on every axis");

  parallel_for(nt, spec.jobs, [&](std::size_t it) {
    const double t = res.t_values[it];
    Field out = hat;
    double sup = 0;
    if (spec.engine == Engine::Multiplier) {
      for (std::size_t i = 0; i < out.values.size(); ++i) {
        cplx m = g.is_nyquist(i) ? 0.0 : q_vals[i] * std::exp(-t * psi_vals[i]);
        out.values[i] *= m;
        if (active[i]) sup = std::max(sup, std::abs(m));
      }
    } else {
      Multiplier B = diag_scaled(spec.q, cb);
      auto cr = contour_semigroup(spec.psi, cs.front(), B, t, u, spec.contour);
      residuals[it] = cr.residual;
      out = fourier_forward(cr.field);
      for (std::size_t i = 0; i < out.values.size(); ++i)
        if (active[i]) sup = std::max(sup, std::abs(out.values[i] / hat.values[i]));
    }
    res.norms[it] = sobolev_norm(out, spec.rho);
    res.ratio[it] = sup;
  });
  res.contour_residual = *std::max_element(residuals.begin(), residuals.end());
  res.field_ratio.clear();
  for (double v : res.norms) res.field_ratio.push_back(v / res.u_norm);
}

// Wave-packet family for x-dependent coefficients (or an explicit MC request).
void packet_path(const SmoothingSpec& spec, SmoothingResult& res) {
  const GridSpec& g = spec.grid;
  require(g.d == 1, "grid.d", "x-dependent smoothing runs are one-dimensional");
  const auto& pk = spec.packets;
  require(pk.n_carriers >= 1 && pk.carrier_hi >= pk.carrier_lo && pk.carrier_lo > 0, "packets",
          "carriers need 0 < lo <= hi and n >= 1");
  require(pk.width > 0, "packets.width", "width must be positive");
  const auto carriers = pk.n_carriers == 1 ? std::vector<double>{pk.carrier_lo}
                                           : logspace(pk.carrier_lo, pk.carrier_hi, pk.n_carriers);
  const auto packets = wave_packets(g, pk.center, pk.width, carriers);
  std::vector<double> u_norms;
  for (const auto& p : packets) u_norms.push_back(sobolev_norm(p, spec.rho));

  HohSymbol bsym = make_hoh_symbol(spec.q, spec.coeff, CoefficientRole::B);
  const bool sigma_const = spec.coeff.sigma_constant();
  const auto cs = constant_values(spec.coeff.sigma);

  std::vector<TestFunction> fs;
  for (double k : carriers) {
    const double x0 = pk.center, w = pk.width;
    fs.push_back([k, x0, w](Point X) {
      double z = (X[0] - x0) / w;
      return std::exp(-0.5 * z * z) * std::polar(1.0, k * X[0]);
    });
  }
  std::vector<std::vector<double>> xs;
  for (int j = 0; j < g.n; ++j) xs.push_back({g.x(j)});

  const std::size_t nt = res.t_values.size();
  res.norms.assign(nt, 0);
  res.ratio.assign(nt, 0);
  res.mc_excluded.assign(nt, 0);
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = res.t_values[it];
    std::vector<Field> pu;
    if (spec.engine == Engine::MonteCarlo) {
      SdeSpec sde;
      sde.driver = mc_driver(spec.psi);
      sde.coeff = spec.coeff;
      sde.h = t * spec.mc.h_fraction;
      sde.paths = spec.mc.paths;
      sde.seed = spec.mc.seed;
      sde.jobs = spec.jobs;
      auto mc = mc_semigroup_multi(sde, fs, t, xs);
      for (const auto& r : mc) {
        Field f(g, Space::Physical);
        f.values = r.mean;
        for (long e : r.n_excluded) res.mc_excluded[it] += e;
        pu.push_back(std::move(f));
      }
    } else {
      if (!sigma_const)
        throw ConfigError("experiment.engine", "x-dependent sigma needs the monte_carlo engine");
      for (const auto& p : packets) {
        if (spec.engine == Engine::Multiplier) {
          pu.push_back(multiplier_semigroup(spec.psi, cs.front(), t, p));
        } else {
          auto cr = contour_semigroup(spec.psi, cs.front(), {}, t, p, spec.contour);
          res.contour_residual = std::max(res.contour_residual, cr.residual);
          pu.push_back(cr.field);
        }
      }
    }
    double best = -1, best_norm = 0;
    for (std::size_t k = 0; k < pu.size(); ++k) {
      Field bv = apply_pdo(bsym, pu[k], {false, spec.jobs});
      double nv = sobolev_norm(bv, spec.rho);
      double r = nv / u_norms[k];
      if (r > best) {
        best = r;
        best_norm = nv;
      }
    }
    res.ratio[it] = best;
    res.norms[it] = best_norm;
  }
  res.field_ratio = res.ratio;
  res.u_norm = *std::max_element(u_norms.begin(), u_norms.end());
}

}  // namespace

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Multiplier: return "multiplier";
    case Engine::Contour: return "contour";
    case Engine::MonteCarlo: return "monte_carlo";
  }
  return "?";
}

Engine engine_from_name(const std::string& name) {
  if (name == "multiplier") return Engine::Multiplier;
  if (name == "contour") return Engine::Contour;
  if (name == "monte_carlo" || name == "mc") return Engine::MonteCarlo;
  throw ConfigError("experiment.engine", "unknown engine '" + name + "'; expected multiplier, contour or monte_carlo");
}

Field broadband_field(const GridSpec& g, double rho) {
  Field hat(g, Space::Frequency);
  double xi[2];
  for (std::size_t i = 0; i < hat.values.size(); ++i) {
    if (g.is_nyquist(i)) continue;
    g.frequency(i, xi);
    double r2 = 0;
    for (int a = 0; a < g.d; ++a) r2 += xi[a] * xi[a];
    hat.values[i] = std::pow(1 + r2, -(rho + 1) / 2);
  }
  return fourier_inverse(hat);
}

std::vector<Field> wave_packets(const GridSpec& g, double x0, double width, const std::vector<double>& carriers) {
  if (g.d != 1) throw DescriptorInvalid("wave packets are one-dimensional");
  std::vector<Field> out;
  for (double k : carriers)
    out.push_back(Field::from_function(g, [=](Point x) {
      double z = (x[0] - x0) / width;
      return std::exp(-0.5 * z * z) * std::polar(1.0, k * x[0]);
    }));
  return out;
}

SmoothingResult smoothing_rate(const SmoothingSpec& spec) {
  const GridSpec& g = spec.grid;
  require(spec.psi.dim() == g.d && spec.q.dim() == g.d && spec.coeff.dim == g.d, "grid.d",
          "psi, q, coefficients and grid must share the dimension");
  require(std::isfinite(spec.rho), "experiment.rho", "rho must be finite");
  SmoothingResult res;
  res.rho = spec.rho;
  res.engine = engine_name(spec.engine);
  res.t_values = spec.t_values.empty() ? logspace(1e-3, 1, 16) : spec.t_values;
  require(res.t_values.size() >= 8, "experiment.t_values", "at least 8 times are required");
  for (std::size_t i = 0; i < res.t_values.size(); ++i) {
    require(res.t_values[i] > 0, "experiment.t_values", "times must be positive");
    if (i) require(res.t_values[i] > res.t_values[i - 1], "experiment.t_values", "times must increase strictly");
  }
  res.xi_max = g.xi_max();

  res.psi_index = estimate_bg_index(spec.psi, 1);
  res.q_index = estimate_bg_index(spec.q, 1);
  res.s1 = res.psi_index.s;
  res.s2 = res.q_index.s;
  if (!(res.s1 > 0)) throw HypothesisViolation("estimated index of psi is not positive (s1 = " + fmt(res.s1) + ")");
  res.gamma_predicted = res.s2 / res.s1;

  res.sector = grid_sector(spec.psi, g);
  if (!res.sector.sectorial) not_sectorial(res.sector);

  if (!spec.borderline && !(res.s2 < res.s1)) {
    res.hypothesis_warning = true;
    res.warnings.push_back("s2 = " + fmt(res.s2) + " is not below s1 = " + fmt(res.s1) +
                           "; the smoothing estimate requires s2 < s1");
  }
  if (spec.borderline && std::abs(res.s2 - res.s1) > 0.05)
    res.warnings.push_back("borderline run requested but s2 = " + fmt(res.s2) + " differs from s1 = " + fmt(res.s1));

  const bool x_dep = !spec.coeff.sigma_constant() || !spec.coeff.b_constant();
  if (x_dep) {
    auto h1 = check_hypothesis1(spec.coeff, 2, default_x_sample(g.d));
    if (!h1.pass) {
      res.hypothesis_warning = true;
      for (const auto& m : h1.messages) res.warnings.push_back("coefficients: " + m);
    }
  }

  if (res.s2 > 0) {
    res.r_star_max = std::pow(res.s2 / (res.s1 * res.t_values.front()), 1 / res.s1);
    res.window_ok = res.r_star_max < res.xi_max;
    if (!res.window_ok)
      res.warnings.push_back("maximizer r* = " + fmt(res.r_star_max) + " at the smallest t exceeds the grid cutoff " +
                             fmt(res.xi_max));
  }

  if (x_dep || spec.engine == Engine::MonteCarlo) {
    if (spec.u) res.warnings.push_back("explicit u is ignored on the wave-packet path");
    packet_path(spec, res);
  } else {
    const Field u = spec.u ? *spec.u : broadband_field(g, spec.rho);
    require(u.grid == g, "u", "initial field lives on a different grid");
    res.u_norm = sobolev_norm(u, spec.rho);
    require(res.u_norm > 0 && std::isfinite(res.u_norm), "u", "initial field must be nonzero with finite norm");
    multiplier_path(spec, u, res);
  }

  for (double r : res.ratio)
    if (!(r > 0)) throw EvaluationError("smoothing ratio vanished; the log-log fit is undefined");
  auto lf = fit_loglog(res.t_values, res.ratio);
  res.gamma_fit = -lf.slope;
  res.fit_residual = lf.rms_residual;
  res.fit_flagged = res.fit_residual > kFitFlag;
  if (res.fit_flagged) res.warnings.push_back("log-log fit residual " + fmt(res.fit_residual) + " exceeds 0.05");
  for (std::size_t i = 0; i < res.t_values.size(); ++i)
    res.constants.push_back(res.ratio[i] * std::pow(res.t_values[i], res.gamma_predicted));
  auto ls = local_slopes(res.t_values, res.ratio);
  for (double v : ls) res.local_slope.push_back(-v);
  return res;
}

double interior_ray_angle(const SectorReport& s) { return kPi / 2 + s.resolvent_angle / 2; }

ResolventDecayResult resolvent_decay(const ResolventSpec& spec) {
  const GridSpec& g = spec.grid;
  require(spec.psi.dim() == g.d && spec.q.dim() == g.d, "grid.d", "psi, q and grid must share the dimension");
  require(spec.n_points >= 8, "experiment.n_points", "at least 8 lambda values are required");
  ResolventDecayResult res;
  res.rho = spec.rho;
  res.ray_angle = spec.ray_angle;
  res.s1 = estimate_bg_index(spec.psi, 1).s;
  res.s2 = estimate_bg_index(spec.q, 1).s;
  if (!(res.s1 > 0)) throw HypothesisViolation("estimated index of psi is not positive");
  res.slope_predicted = res.s2 / res.s1 - 1;
  res.sector = grid_sector(spec.psi, g);
  if (!res.sector.sectorial) not_sectorial(res.sector);
  if (!(std::abs(spec.ray_angle) < kPi / 2 + res.sector.resolvent_angle)) {
    std::ostringstream os;
    os << "ray angle " << spec.ray_angle << " lies outside the resolvent sector |arg lambda| < "
       << kPi / 2 + res.sector.resolvent_angle;
    throw HypothesisViolation(os.str());
  }
  if (!(res.s2 < res.s1))
    res.warnings.push_back("s2 = " + fmt(res.s2) + " is not below s1 = " + fmt(res.s1));

  double lo = spec.lambda_lo;
  if (std::isnan(lo)) {
    lo = 1.0;
    if (res.s2 > 0 && res.s2 < res.s1) lo = (res.s1 - res.s2) / res.s2 * std::pow(0.5, res.s1);
  }
  double hi = std::isnan(spec.lambda_hi) ? 1e3 * lo : spec.lambda_hi;
  require(lo > 0 && hi > lo, "experiment.lambda", "need 0 < lambda_lo < lambda_hi");
  if (hi / lo < 1e3 * (1 - 1e-12)) res.warnings.push_back("|lambda| spans fewer than three decades");
  res.abs_lambda = logspace(lo, hi, spec.n_points);
  for (double r : res.abs_lambda) res.lambda_values.push_back(std::polar(r, spec.ray_angle));

  const auto psi_vals = multiplier_on_grid(symbol_multiplier(spec.psi), g);
  const auto q_vals = multiplier_on_grid(symbol_multiplier(spec.q), g);
  const Field u = spec.u ? *spec.u : broadband_field(g, spec.rho);
  require(u.grid == g, "u", "initial field lives on a different grid");
  const Field hat = u.space == Space::Frequency ? u : fourier_forward(u);
  const auto active = active_modes(hat);
  const double un = sobolev_norm(hat, spec.rho);
  require(un > 0 && std::isfinite(un), "u", "initial field must be nonzero with finite norm");

  const std::size_t nl = res.lambda_values.size();
  res.norms.assign(nl, 0);
  res.ratio.assign(nl, 0);
  parallel_for(nl, spec.jobs, [&](std::size_t il) {
    const cplx lam = res.lambda_values[il];
    Field out = hat;
    double sup = 0;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (g.is_nyquist(i)) {
        out.values[i] = 0;
        continue;
      }
      cplx den = lam + psi_vals[i];
      if (std::abs(den) < 1e-10) {
        std::ostringstream os;
        os << "lambda = " << lam << " lies within 1e-10 of the spectrum";
        throw NearSpectrum(os.str());
      }
      cplx m = q_vals[i] / den;
      out.values[i] *= m;
      if (active[i]) sup = std::max(sup, std::abs(m));
    }
    res.norms[il] = sobolev_norm(out, spec.rho);
    res.ratio[il] = sup;
  });
  for (double v : res.norms) res.field_ratio.push_back(v / un);
  auto lf = fit_loglog(res.abs_lambda, res.ratio);
  res.slope_fit = lf.slope;
  res.fit_residual = lf.rms_residual;
  res.fit_flagged = res.fit_residual > kFitFlag;
  if (res.fit_flagged) res.warnings.push_back("log-log fit residual " + fmt(res.fit_residual) + " exceeds 0.05");
  return res;
}

MaximizerResult maximizer_check(double s1, double s2, double lambda) {
  if (!(s2 > 0 && s2 < s1)) throw DescriptorInvalid("maximizer needs 0 < s2 < s1");
  if (!(lambda > 0)) throw DescriptorInvalid("maximizer needs lambda > 0");
  MaximizerResult r{s1, s2, lambda};
  r.analytic = std::pow(s2 * lambda / (s1 - s2), 1 / s1);

  // Work in u = log ξ; the objective is log of ξ^{s2}/(λ + ξ^{s1}).
  auto f = [&](double u) { return s2 * u - std::log(lambda + std::exp(s1 * u)); };
  const int n = 200000;
  const double a = std::log(1e-8), b = std::log(1e8), du = (b - a) / (n - 1);
  int best = 0;
  double fbest = f(a);
  for (int i = 1; i < n; ++i) {
    double v = f(a + i * du);
    if (v > fbest) {
      fbest = v;
      best = i;
    }
  }
  double lo = a + std::max(0, best - 1) * du, hi = a + std::min(n - 1, best + 1) * du;
  auto m = boost::math::tools::brent_find_minima([&](double u) { return -f(u); }, lo, hi,
                                                 std::numeric_limits<double>::digits / 2);
  r.numeric = std::exp(m.first);
  r.rel_error = std::abs(r.numeric - r.analytic) / r.analytic;
  return r;
}

GeneratorReport generator_consistency(const SdeSpec& sde, const std::vector<std::vector<double>>& xs,
                                      const std::vector<std::vector<double>>& xis, double t) {
  GeneratorReport rep;
  rep.pass = true;
  for (const auto& x : xs) {
    for (auto& e : mc_symbol_extraction(sde, x, xis, t)) {
      rep.max_deviation = std::max(rep.max_deviation, e.deviation);
      if (e.band > 0) rep.max_band_fraction = std::max(rep.max_band_fraction, e.deviation / e.band);
      rep.pass = rep.pass && e.inside;
      rep.points.push_back({x, std::move(e)});
    }
  }
  return rep;
}

double measured_resolvent_constant(const SymbolDescriptor& psi, const SymbolDescriptor& q, const GridSpec& g,
                                   double theta_prime, double eps) {
  const auto pv = multiplier_on_grid(symbol_multiplier(psi), g);
  const auto qv = multiplier_on_grid(symbol_multiplier(q), g);
  const double phi = kPi / 2 + theta_prime;
  double C = 0;
  for (double r : logspace(1e-2, 1e4, 61)) {
    for (double sgn : {1.0, -1.0}) {
      const cplx lam = std::polar(r, sgn * phi);
      double sup = 0;
      for (std::size_t i = 0; i < pv.size(); ++i)
        if (!g.is_nyquist(i)) sup = std::max(sup, std::abs(qv[i] / (lam + pv[i])));
      C = std::max(C, std::pow(r, 1 - eps) * sup);
    }
  }
  return C;
}

ContourBoundReport contour_bound_check(const SymbolDescriptor& psi, const SymbolDescriptor& q,
                                       const GridSpec& g, double theta_prime, double eps,
                                       const std::vector<double>& t_values) {
  if (!(eps > 0 && eps < 1)) throw DescriptorInvalid("contour bound needs 0 < eps < 1");
  ContourBoundReport rep;
  rep.eps = eps;
  rep.theta_prime = theta_prime;
  rep.resolvent_constant = measured_resolvent_constant(psi, q, g, theta_prime, eps);
  rep.prefactor = boost::math::tgamma(eps) / kPi * std::pow(std::sin(theta_prime), -eps) * rep.resolvent_constant;
  const auto pv = multiplier_on_grid(symbol_multiplier(psi), g);
  const auto qv = multiplier_on_grid(symbol_multiplier(q), g);
  rep.holds = true;
  for (double t : t_values) {
    double sup = 0;
    for (std::size_t i = 0; i < pv.size(); ++i)
      if (!g.is_nyquist(i)) sup = std::max(sup, std::abs(qv[i] * std::exp(-t * pv[i])));
    rep.t_values.push_back(t);
    rep.measured.push_back(sup);
    rep.bound.push_back(rep.prefactor * std::pow(t, -eps));
    rep.holds = rep.holds && sup <= rep.bound.back();
  }
  return rep;
}

std::vector<SectorConstantEntry> sector_constant_study(const std::vector<double>& alphas, const GridSpec& g) {
  std::vector<SectorConstantEntry> out;
  for (double a : alphas) {
    if (!(a > 0 && a < 1)) throw DescriptorInvalid("sector study needs 0 < alpha < 1");
    auto psi = SymbolDescriptor::subordinated_drift(a);
    auto q = SymbolDescriptor::power(a / 2);
    auto sec = grid_sector(psi, g);
    if (!sec.sectorial) not_sectorial(sec);
    SectorConstantEntry e;
    e.alpha = a;
    e.theta_prime = sec.resolvent_angle / 2;
    // Place the maximizer of ξ^{α/2} e^{-t ξ^α cos(απ/2)} near |ξ| = 10.
    const double tc = 0.5 / (std::cos(a * kPi / 2) * std::pow(10.0, a));
    const auto pv = multiplier_on_grid(symbol_multiplier(psi), g);
    const auto qv = multiplier_on_grid(symbol_multiplier(q), g);
    for (double t : {tc / 1.5, tc, tc * 1.5}) {
      double sup = 0;
      for (std::size_t i = 0; i < pv.size(); ++i)
        if (!g.is_nyquist(i)) sup = std::max(sup, std::abs(qv[i] * std::exp(-t * pv[i])));
      e.constant = std::max(e.constant, std::sqrt(t) * sup);
    }
    e.prefactor = e.constant / std::sin(e.theta_prime);
    out.push_back(e);
  }
  return out;
}

}  // namespace levysg
