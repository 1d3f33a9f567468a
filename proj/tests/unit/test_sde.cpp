#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "levysg/semigroup.hpp"
#include "oracles.hpp"

using namespace levysg;

namespace {

// Empirical characteristic function E e^{iξX} with its standard error.
oracle::ComplexMean empirical_cf(const std::vector<double>& xs, double xi) {
  std::vector<cplx> v;
  v.reserve(xs.size());
  for (double x : xs) v.push_back(std::polar(1.0, xi * x));
  return oracle::complex_mean(v);
}

std::vector<double> draws(const SymbolDescriptor& s, double h, std::size_t n, std::uint64_t key) {
  Philox4x64 rng(key, 0);
  std::vector<double> out(n);
  for (auto& v : out) v = sample_increment(s, h, rng);
  return out;
}

SdeSpec spec(SymbolDescriptor driver, double h, long paths, std::uint64_t seed = 1) {
  SdeSpec s;
  s.driver = std::move(driver);
  s.h = h;
  s.paths = paths;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("Philox4x64-10 known answers") {
  Philox4x64 a(0, 0);
  const std::uint64_t want0[8] = {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
                                  0x907d7a052fd5b4dcULL, 0x809bf322883987c3ULL, 0x471128b9e807f7ddULL,
                                  0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL};
  for (auto w : want0) CHECK(a() == w);
  Philox4x64 b(42, 7);
  const std::uint64_t want1[4] = {0xa64064f34e84b9a3ULL, 0xe287959a866a08fdULL, 0x8dc181f009b96c03ULL,
                                  0xf3f6001d4fa83454ULL};
  for (auto w : want1) CHECK(b() == w);

  Philox4x64 u(3, 4);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform_open();
    REQUIRE(v > 0);
    REQUIRE(v < 1);
  }
}

TEST_CASE("Brownian increments have variance 2h") {
  auto xs = draws(SymbolDescriptor::brownian(), 1.0, 100000, 1);
  double m = 0, q = 0;
  for (double x : xs) m += x;
  m /= xs.size();
  for (double x : xs) q += (x - m) * (x - m);
  const double var = q / (xs.size() - 1);
  // Var(s²) = 2σ⁴/(n-1) for normal samples.
  const double sd = std::sqrt(2 * 4.0 / (xs.size() - 1));
  CHECK(std::abs(var - 2.0) <= 3 * sd);
  CHECK_THROWS_AS(draws(SymbolDescriptor::brownian(), 0.0, 1, 1), DescriptorInvalid);
}

TEST_CASE("stable increments reproduce the characteristic function") {
  for (double alpha : {0.7, 1.0, 1.5}) {
    auto xs = draws(SymbolDescriptor::alpha_stable(alpha), 1.0, 100000, 2);
    for (double xi : {0.5, 1.0, 2.0}) {
      auto cf = empirical_cf(xs, xi);
      INFO("alpha " << alpha << " xi " << xi);
      CHECK(std::abs(cf.mean - std::exp(-std::pow(xi, alpha))) <= 3 * cf.std_error);
    }
  }
}

TEST_CASE("stable self-similarity by two-sample KS") {
  for (double alpha : {0.7, 1.5}) {
    const double h = 0.3;
    auto a = draws(SymbolDescriptor::alpha_stable(alpha), 2 * h, 10000, 10);
    auto b = draws(SymbolDescriptor::alpha_stable(alpha), h, 10000, 11);
    for (auto& v : b) v *= std::pow(2.0, 1 / alpha);
    INFO("alpha " << alpha);
    CHECK(oracle::ks_statistic(a, b) < oracle::ks_critical_1pct(a.size(), b.size()));
  }
}

TEST_CASE("NIG increments reproduce the characteristic function") {
  const double m = 0.3, delta = 1, a = 2, b = 1, h = 0.5;
  auto xs = draws(SymbolDescriptor::nig(m, delta, a, b), h, 100000, 3);
  for (double xi : {0.5, 1.0, 2.0}) {
    const cplx bi = {b, xi};
    const cplx psi = cplx(0, -m * xi) + delta * (std::sqrt(a * a - bi * bi) - std::sqrt(a * a - b * b));
    auto cf = empirical_cf(xs, xi);
    INFO("xi " << xi);
    CHECK(std::abs(cf.mean - std::exp(-h * psi)) <= 3 * cf.std_error);
  }
}

TEST_CASE("two-dimensional stable increments and the Kanter sampler") {
  // E e^{iξ·L} = E e^{-S|ξ|²}; at |ξ| = 1 this is E e^{-S} = e^{-1}.
  const double alpha = 1.5;
  auto s = SymbolDescriptor::alpha_stable(alpha, 2);
  Philox4x64 rng(4, 0);
  const std::vector<std::array<double, 2>> freqs = {{0.6, 0.8}, {1.0, 1.0}, {-0.3, 0.2}};
  std::vector<std::vector<cplx>> vals(freqs.size());
  double v[2];
  for (int i = 0; i < 100000; ++i) {
    sample_increment(s, 1.0, rng, v);
    for (std::size_t j = 0; j < freqs.size(); ++j)
      vals[j].push_back(std::polar(1.0, freqs[j][0] * v[0] + freqs[j][1] * v[1]));
  }
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    auto cf = oracle::complex_mean(vals[j]);
    const double r = std::hypot(freqs[j][0], freqs[j][1]);
    INFO("xi (" << freqs[j][0] << ", " << freqs[j][1] << ")");
    CHECK(std::abs(cf.mean - std::exp(-std::pow(r, alpha))) <= 3 * cf.std_error);
  }
  CHECK_THROWS_AS(sample_increment(s, 1.0, rng), DescriptorInvalid);
  CHECK_THROWS_AS(sample_increment(SymbolDescriptor::meixner(0, 1, 1, 0), 1.0, rng), DescriptorInvalid);
}

TEST_CASE("MC evolution of a plane wave") {
  auto sde = spec(SymbolDescriptor::alpha_stable(1.5), 0.05, 20000, 9);
  const double xi0 = 1.3, t = 0.5;
  const std::vector<std::vector<double>> xs = {{-1.0}, {0.0}, {2.0}};
  auto res = mc_semigroup(sde, [xi0](Point x) { return std::polar(1.0, xi0 * x[0]); }, t, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const cplx want = std::polar(1.0, xi0 * xs[i][0]) * std::exp(-t * std::pow(xi0, 1.5));
    INFO("x " << xs[i][0]);
    CHECK(std::abs(res.mean[i] - want) <= 3 * res.std_error[i]);
    CHECK(res.n_excluded[i] == 0);
  }
}

TEST_CASE("MC at t = 0 and the Brownian second moment") {
  auto sde = spec(SymbolDescriptor::brownian(), 0.1, 20000, 12);
  auto sq = [](Point x) { return cplx(x[0] * x[0]); };
  const std::vector<std::vector<double>> xs = {{-0.5}, {0.0}, {1.5}};
  auto r0 = mc_semigroup(sde, sq, 0.0, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(r0.mean[i] == cplx(xs[i][0] * xs[i][0]));
    CHECK(r0.std_error[i] == 0.0);
  }
  const double t = 1.0;
  auto r = mc_semigroup(sde, sq, t, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    INFO("x " << xs[i][0]);
    CHECK(std::abs(r.mean[i] - (xs[i][0] * xs[i][0] + 2 * t)) <= 3 * r.std_error[i]);
  }
}

TEST_CASE("MC estimates do not depend on the worker count") {
  auto sde = spec(SymbolDescriptor::nig(0.2, 1, 2, 0.5), 0.1, 5000, 21);
  sde.coeff = CoefficientField::scalar(ScalarField::two_plus_sin(), ScalarField::constant(1), 1, 3);
  auto f = [](Point x) { return std::polar(1.0, 0.7 * x[0]); };
  const std::vector<std::vector<double>> xs = {{0.0}, {1.0}};
  auto a = mc_semigroup(sde, f, 0.5, xs);
  auto again = mc_semigroup(sde, f, 0.5, xs);
  sde.jobs = 3;
  auto b = mc_semigroup(sde, f, 0.5, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::memcmp(&a.mean[i], &b.mean[i], sizeof(cplx)) == 0);
    CHECK(std::memcmp(&a.mean[i], &again.mean[i], sizeof(cplx)) == 0);
    CHECK(a.std_error[i] == b.std_error[i]);
  }
  sde.seed = 22;
  CHECK(mc_semigroup(sde, f, 0.5, xs).mean[0] != a.mean[0]);
}

TEST_CASE("exploding paths are excluded and counted") {
  auto sde = spec(SymbolDescriptor::brownian(), 0.01, 2000, 31);
  sde.coeff = CoefficientField::scalar(ScalarField::linear(0, 100), ScalarField::constant(1), 0, HUGE_VAL);
  auto r = mc_semigroup(sde, [](Point x) { return cplx(x[0]); }, 1.0, {{1.0}});
  CHECK(r.n_excluded[0] > 0);
  CHECK(r.n_excluded[0] <= sde.paths);
}

TEST_CASE("MC preconditions") {
  auto f = [](Point) { return cplx(1); };
  CHECK_THROWS_AS(mc_semigroup(spec(SymbolDescriptor::brownian(), 0.1, 999), f, 1, {{0.0}}), ConfigError);
  CHECK_THROWS_AS(mc_semigroup(spec(SymbolDescriptor::meixner(0, 1, 1, 0), 0.1, 1000), f, 1, {{0.0}}), ConfigError);
  CHECK_THROWS_AS(mc_semigroup(spec(SymbolDescriptor::brownian(), 0.3, 1000), f, 1, {{0.0}}), ConfigError);
  CHECK_THROWS_AS(mc_semigroup(spec(SymbolDescriptor::brownian(), 0.0, 1000), f, 1, {{0.0}}), ConfigError);
}

TEST_CASE("symbol extraction from short-time paths") {
  auto sde = spec(SymbolDescriptor::alpha_stable(1.5), 0.01, 100000, 41);
  auto est = mc_symbol_extraction(sde, {0.0}, {{1.0}, {0.0}}, 0.01);
  REQUIRE(est.size() == 2);
  CHECK(est[0].target == cplx(1.0));
  CHECK(est[0].bias_bound == 0.01 * 0.5);
  CHECK(est[0].inside);
  CHECK(est[1].estimate == cplx(0));
  CHECK(est[1].std_error == 0.0);

  sde.coeff = CoefficientField::scalar(ScalarField::two_plus_sin(), ScalarField::constant(1), 1, 3);
  auto var = mc_symbol_extraction(sde, {0.0}, {{1.0}}, 0.01);
  CHECK(std::abs(var[0].target - std::pow(2.0, 1.5)) <= 1e-12);
  INFO("estimate " << var[0].estimate << " band " << var[0].band);
  CHECK(var[0].inside);

  CHECK_THROWS_AS(mc_symbol_extraction(sde, {0.0}, {{1.0}}, 0.02), ConfigError);
  sde.paths = 10000;
  CHECK_THROWS_AS(mc_symbol_extraction(sde, {0.0}, {{1.0}}, 0.01), ConfigError);
}
