// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "levysg/classify.hpp"
#include "levysg/experiments.hpp"
#include "levysg/semigroup.hpp"
#include "levysg/spectral.hpp"
#include "oracles.hpp"

using namespace levysg;

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.size() < 400) detail += " [failed: " + what + "]";
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<double> logspace_t(double lo, double hi, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return t;
}

Field noise_field(const GridSpec& g, std::uint64_t seed) {
  Field f(g, Space::Physical);
  f.values = oracle::white_noise(g.size(), seed);
  return f;
}

double rel_l2(const Field& a, const Field& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

const std::vector<std::pair<double, double>>& index_pairs() {
  static const std::vector<std::pair<double, double>> p = [] {
    std::vector<std::pair<double, double>> v;
    for (double s1 : {1.0, 1.5, 2.0})
      for (double f : {0.25, 0.5, 0.75}) v.push_back({s1, f * s1});
    return v;
  }();
  return p;
}

SmoothingSpec power_spec(double s1, double s2, double rho) {
  SmoothingSpec s;
  s.psi = SymbolDescriptor::power(s1);
  s.q = SymbolDescriptor::power(s2);
  s.rho = rho;
  return s;
}

// 1 and 2 share the runs.
std::vector<std::vector<SmoothingResult>> smoothing_runs() {
  std::vector<std::vector<SmoothingResult>> out;
  for (auto [s1, s2] : index_pairs()) {
    std::vector<SmoothingResult> per_rho;
    for (double rho : {-1.0, 0.0, 1.0}) per_rho.push_back(smoothing_rate(power_spec(s1, s2, rho)));
    out.push_back(std::move(per_rho));
  }
  return out;
}

Criterion smoothing_exponent(const std::vector<std::vector<SmoothingResult>>& runs) {
  Criterion c;
  double worst_gamma = 0, worst_env = 0;
  for (std::size_t p = 0; p < runs.size(); ++p) {
    const auto [s1, s2] = index_pairs()[p];
    const auto& r = runs[p][1];  // ρ = 0
    const double dg = std::abs(r.gamma_fit - s2 / s1);
    worst_gamma = std::max(worst_gamma, dg);
    c.require(dg <= 0.02, "gamma (" + num(s1) + ", " + num(s2) + ") = " + num(r.gamma_fit));
    for (std::size_t i = 0; i < r.t_values.size(); ++i) {
      const double t = r.t_values[i];
      const double env = oracle::log_grid_max(
          [=](double x) { return std::pow(x, s2) * std::exp(-t * std::pow(x, s1)); }, 1e-4, r.xi_max, 4000);
      const double e = std::abs(r.ratio[i] / env - 1);
      worst_env = std::max(worst_env, e);
      c.require(e <= 0.01, "envelope (" + num(s1) + ", " + num(s2) + ") t = " + num(t));
    }
  }
  c.detail = "9 pairs, max |gamma - s2/s1| = " + num(worst_gamma) + " (tol 0.02), max envelope error = " +
             num(worst_env) + " (tol 0.01)" + c.detail;
  return c;
}

Criterion rho_uniformity(const std::vector<std::vector<SmoothingResult>>& runs) {
  Criterion c;
  double worst = 0;
  for (std::size_t p = 0; p < runs.size(); ++p) {
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (const auto& r : runs[p]) {
      lo = std::min(lo, r.gamma_fit);
      hi = std::max(hi, r.gamma_fit);
    }
    worst = std::max(worst, hi - lo);
    c.require(hi - lo <= 0.02, "pair " + std::to_string(p));
  }
  c.detail = "rho in {-1, 0, 1}, max gamma spread = " + num(worst) + " (tol 0.02)" + c.detail;
  return c;
}

Criterion borderline() {
  Criterion c;
  std::string vals;
  for (double r : {1.0, 1.5}) {
    SmoothingSpec s;
    s.psi = SymbolDescriptor::power(r);
    s.q = SymbolDescriptor::bracket(r);
    s.borderline = true;
    s.t_values = logspace_t(1e-3, 1e-1, 16);
    auto res = smoothing_rate(s);
    vals += " r=" + num(r) + ": gamma " + num(res.gamma_fit);
    c.require(std::abs(res.gamma_fit - 1) <= 0.03, "r = " + num(r));
  }
  c.detail = "q = <xi>^r," + vals + " (tol 0.03)" + c.detail;
  return c;
}

Criterion resolvent() {
  Criterion c;
  double worst = 0;
  for (auto [s1, s2] : index_pairs()) {
    ResolventSpec spec;
    spec.psi = SymbolDescriptor::power(s1);
    spec.q = SymbolDescriptor::power(s2);
    auto real = resolvent_decay(spec);
    spec.ray_angle = interior_ray_angle(real.sector);
    auto ray = resolvent_decay(spec);
    for (const auto* r : {&real, &ray}) {
      const double d = std::abs(r->slope_fit - (s2 / s1 - 1));
      worst = std::max(worst, d);
      c.require(d <= 0.02, "slope (" + num(s1) + ", " + num(s2) + ") angle " + num(r->ray_angle));
      c.require(r->abs_lambda.back() / r->abs_lambda.front() >= 1e3 * (1 - 1e-12), "three decades");
    }
  }
  double worst_max = 0;
  int triples = 0;
  for (auto [s1, s2] : {std::pair{2.0, 1.0}, std::pair{1.5, 0.5}, std::pair{1.0, 0.25}, std::pair{2.0, 1.5}}) {
    for (double lambda : {0.5, 4.0, 100.0}) {
      auto m = maximizer_check(s1, s2, lambda);
      const double closed = std::pow(s2 * lambda / (s1 - s2), 1 / s1);
      const double e = std::abs(m.numeric - closed) / closed;
      worst_max = std::max(worst_max, e);
      c.require(e <= 1e-3, "maximizer (" + num(s1) + ", " + num(s2) + ", " + num(lambda) + ")");
      ++triples;
    }
  }
  c.detail = "9 pairs x 2 rays, max slope error = " + num(worst) + " (tol 0.02); " + std::to_string(triples) +
             " maximizer triples, max rel error = " + num(worst_max) + " (tol 1e-3)" + c.detail;
  return c;
}

Criterion index_recovery() {
  Criterion c;
  double worst_stable = 0;
  for (double a : {0.5, 1.0, 1.5, 1.9}) {
    auto r = estimate_bg_index(SymbolDescriptor::alpha_stable(a), 1);
    worst_stable = std::max(worst_stable, std::abs(r.s - a));
    c.require(std::abs(r.s - a) <= 0.02, "stable " + num(a));
  }
  IndexOptions far;
  far.window_lo = 1e2;
  far.window_hi = 1e5;
  const double sm = estimate_bg_index(SymbolDescriptor::meixner(0.3, 1, 2, 0.2), 1, far).s;
  const double sn = estimate_bg_index(SymbolDescriptor::nig(0.3, 1, 2, 1), 1, far).s;
  c.require(std::abs(sm - 1) <= 0.05, "meixner index " + num(sm));
  c.require(std::abs(sn - 1) <= 0.05, "nig index " + num(sn));

  const auto sample = FrequencySample::log_radial(1, 1e3, 1e6, 61);
  double worst_theta = 0;
  for (auto [m, delta, a] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.5, 2.0, 1.0}, std::tuple{2.0, 1.0, 3.0}}) {
    auto rep = sector_kappa(SymbolDescriptor::meixner(m, delta, a, 0), sample);
    const double d = std::abs(rep.theta - std::atan(m / (delta * a)));
    worst_theta = std::max(worst_theta, d);
    c.require(rep.sectorial && d <= 0.02, "meixner theta (" + num(m) + ", " + num(delta) + ", " + num(a) + ")");
  }
  c.detail = "stable max |s - alpha| = " + num(worst_stable) + " (tol 0.02), meixner s = " + num(sm) +
             ", nig s = " + num(sn) + " (tol 0.05), meixner max theta error = " + num(worst_theta) + " (tol 0.02)" +
             c.detail;
  return c;
}

Criterion engine_equivalence() {
  Criterion c;
  GridSpec g(1, 256, 10);
  double worst = 0;
  for (const auto& psi : {SymbolDescriptor::brownian(), SymbolDescriptor::alpha_stable(1.5)}) {
    for (int seed = 0; seed < 2; ++seed) {
      auto u = noise_field(g, 300 + seed);
      for (double t : {0.1, 0.5, 1.0, 2.0}) {
        auto cr = contour_semigroup(psi, 1, {}, t, u);
        const double e = rel_l2(cr.field, multiplier_semigroup(psi, 1, t, u));
        worst = std::max(worst, e);
        c.require(e <= 1e-7, psi.name() + " t = " + num(t));
      }
    }
  }
  double worst_factor = HUGE_VAL;
  for (const auto& psi : {SymbolDescriptor::brownian(), SymbolDescriptor::alpha_stable(1.5)}) {
    auto u = noise_field(g, 400);
    for (double t : {0.1, 1.0}) {
      auto exact = multiplier_semigroup(psi, 1, t, u);
      double prev = -1;
      for (int n : {8, 16, 32, 64, 128}) {
        ContourSpec cs;
        cs.n_ray = n;
        cs.n_arc = n;
        cs.certify = false;
        const double e = rel_l2(contour_semigroup(psi, 1, {}, t, u, cs).field, exact);
        // Doublings that start at roundoff level have nothing left to reduce.
        if (prev > 1e-12) {
          worst_factor = std::min(worst_factor, prev / e);
          c.require(e <= prev / 4, psi.name() + " doubling at n = " + std::to_string(n));
        }
        prev = e;
      }
    }
  }
  c.detail = "max rel L2 error = " + num(worst) + " (tol 1e-7), min reduction per doubling = " + num(worst_factor) +
             "x (need 4x)" + c.detail;
  return c;
}

Criterion generator_identity() {
  Criterion c;
  SdeSpec sde;
  sde.driver = SymbolDescriptor::alpha_stable(1.5);
  sde.h = 0.01;
  sde.paths = 100000;
  sde.seed = 17;
  const std::vector<std::vector<double>> xs = {{-1.0}, {0.0}, {0.5}, {1.0}};
  const std::vector<std::vector<double>> xis = {{0.5}, {1.0}, {1.5}, {2.0}};
  double worst = 0;
  std::size_t points = 0;
  for (int variant = 0; variant < 2; ++variant) {
    if (variant == 1)
      sde.coeff = CoefficientField::scalar(ScalarField::two_plus_sin(), ScalarField::constant(1), 1, 3);
    auto rep = generator_consistency(sde, xs, xis, 0.01);
    for (const auto& p : rep.points) {
      // Target recomputed here, not taken from the report.
      const double s = variant == 0 ? 1.0 : 2 + std::sin(p.x[0]);
      const double target = std::pow(s * std::abs(p.estimate.xi[0]), 1.5);
      const double band = 0.01 * target * target / 2 + 3 * p.estimate.std_error;
      const double dev = std::abs(p.estimate.estimate - target);
      worst = std::max(worst, dev / band);
      c.require(dev <= band, "x = " + num(p.x[0]) + " xi = " + num(p.estimate.xi[0]));
      ++points;
    }
  }
  c.detail = std::to_string(points) + " (x, xi) points over constant and 2+sin sigma, max deviation / band = " +
             num(worst) + " (need <= 1)" + c.detail;
  return c;
}

Criterion spectral() {
  Criterion c;
  double plan = 0, trip = 0, pdo = 0, mult_excess = -HUGE_VAL;
  const auto m = [](Freq xi) { return cplx(xi[0] * xi[0] * std::exp(-xi[0] * xi[0] / 4)); };
  for (int k = 0; k < 100; ++k) {
    GridSpec g(1, 128, 4 + 0.05 * k);
    auto f = noise_field(g, 1000 + k);
    plan = std::max(plan, std::abs(sobolev_norm(f, 0) / l2_norm(f) - 1));
    trip = std::max(trip, rel_l2(fourier_inverse(fourier_forward(f)), f));

    auto a = make_hoh_symbol(SymbolDescriptor::alpha_stable(1.5), CoefficientField::constant(1.3));
    pdo = std::max(pdo, rel_l2(apply_pdo(a, f), apply_multiplier(symbol_multiplier(SymbolDescriptor::alpha_stable(1.5), 1.3), f)));

    double mmax = 0;
    for (int j = 0; j < g.n; ++j)
      if (j != g.n / 2) mmax = std::max(mmax, std::abs(m(Freq(std::vector<double>{g.xi(j)}.data(), 1))));
    mult_excess = std::max(mult_excess, l2_norm(apply_multiplier(m, f)) / l2_norm(f) - mmax);
  }
  c.require(plan <= 1e-12, "Plancherel");
  c.require(trip <= 1e-12, "round trip");
  c.require(pdo <= 1e-10, "apply_pdo vs multiplier");
  c.require(mult_excess <= 1e-10, "multiplier norm above grid max");

  // Attainment by the mode at the argmax frequency.
  GridSpec g(1, 128, 8);
  double mmax = 0, arg = 0;
  for (int j = 0; j < g.n; ++j) {
    if (j == g.n / 2) continue;
    const double xi = g.xi(j), v = xi * xi * std::exp(-xi * xi / 4);
    if (v > mmax) {
      mmax = v;
      arg = xi;
    }
  }
  auto peak = Field::from_function(g, [arg](Point x) { return std::polar(1.0, arg * x[0]); });
  const double attained = l2_norm(apply_multiplier(m, peak)) / l2_norm(peak) / mmax;
  c.require(attained >= 0.99, "attainment");

  std::mt19937_64 gen(8);
  std::cauchy_distribution<double> cd(0, 5);
  double peetre = 0;
  for (double s : {-2.0, -1.0, 1.0, 2.0}) {
    double w = 0;
    for (int i = 0; i < 10000; ++i) w = std::max(w, peetre_ratio(s, cd(gen), cd(gen)));
    peetre = std::max(peetre, w / std::pow(2.0, std::abs(s) / 2));
  }
  c.require(peetre <= 1, "Peetre");
  c.detail = "100 fields: Plancherel " + num(plan) + ", round trip " + num(trip) + " (tol 1e-12), pdo vs multiplier " +
             num(pdo) + " (tol 1e-10), multiplier norm excess " + num(mult_excess) + " (tol 1e-10), attained " +
             num(attained) + " of max; Peetre max ratio / 2^{|s|/2} = " + num(peetre) + c.detail;
  return c;
}

Criterion distributional() {
  Criterion c;
  const std::vector<double> freqs = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0};
  struct Sampler {
    SymbolDescriptor s;
    double h;
    std::function<cplx(double)> psi;
  };
  const double m = 0.3, delta = 1, a = 2, b = 1;
  std::vector<Sampler> samplers = {
      {SymbolDescriptor::brownian(), 0.5, [](double xi) { return cplx(xi * xi); }},
      {SymbolDescriptor::alpha_stable(0.7), 1.0, [](double xi) { return cplx(std::pow(std::abs(xi), 0.7)); }},
      {SymbolDescriptor::alpha_stable(1.0), 1.0, [](double xi) { return cplx(std::abs(xi)); }},
      {SymbolDescriptor::alpha_stable(1.5), 1.0, [](double xi) { return cplx(std::pow(std::abs(xi), 1.5)); }},
      {SymbolDescriptor::nig(m, delta, a, b), 0.5,
       [=](double xi) {
         const cplx bi = {b, xi};
         return cplx(0, -m * xi) + delta * (std::sqrt(a * a - bi * bi) - std::sqrt(a * a - b * b));
       }},
  };
  double worst = 0;
  std::uint64_t key = 50;
  for (const auto& s : samplers) {
    Philox4x64 rng(key++, 0);
    std::vector<double> xs(100000);
    for (auto& v : xs) v = sample_increment(s.s, s.h, rng);
    for (double xi : freqs) {
      std::vector<cplx> e;
      e.reserve(xs.size());
      for (double v : xs) e.push_back(std::polar(1.0, xi * v));
      auto cf = oracle::complex_mean(e);
      const double z = std::abs(cf.mean - std::exp(-s.h * s.psi(xi))) / cf.std_error;
      worst = std::max(worst, z);
      c.require(z <= 3, s.s.name() + " xi = " + num(xi));
    }
  }
  double worst_ks = 0;
  for (double alpha : {0.7, 1.5}) {
    Philox4x64 r1(90, 0), r2(91, 0);
    std::vector<double> x(10000), y(10000);
    for (auto& v : x) v = sample_increment(SymbolDescriptor::alpha_stable(alpha), 0.6, r1);
    for (auto& v : y) v = std::pow(2.0, 1 / alpha) * sample_increment(SymbolDescriptor::alpha_stable(alpha), 0.3, r2);
    const double frac = oracle::ks_statistic(x, y) / oracle::ks_critical_1pct(x.size(), y.size());
    worst_ks = std::max(worst_ks, frac);
    c.require(frac < 1, "KS alpha = " + num(alpha));
  }
  c.detail = std::to_string(samplers.size()) + " samplers x 8 frequencies, max |cf - e^{-h psi}| / stderr = " +
             num(worst) + " (need <= 3); KS statistic / 1% critical = " + num(worst_ks) + " (need < 1)" + c.detail;
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Criterion()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = f();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", id, name, c.detail.c_str(), secs);
    std::fflush(stdout);
    if (!c.pass) ++failures;
  };

  std::vector<std::vector<SmoothingResult>> runs;
  report(1, "smoothing exponent", [&] {
    runs = smoothing_runs();
    return smoothing_exponent(runs);
  });
  report(2, "rho uniformity", [&] {
    if (runs.empty()) throw std::runtime_error("smoothing runs unavailable");
    return rho_uniformity(runs);
  });
  report(3, "borderline 1/t rate", borderline);
  report(4, "resolvent decay and maximizer", resolvent);
  report(5, "index and sector recovery", index_recovery);
  report(6, "contour vs multiplier engines", engine_equivalence);
  report(7, "generator identity", generator_identity);
  report(8, "spectral invariants", spectral);
  report(9, "sampler distributions", distributional);
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures ? 1 : 0;
}
