#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "levysg/classify.hpp"
#include "levysg/symbols.hpp"
#include "oracles.hpp"

using namespace levysg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<SymbolDescriptor> catalog_samples() {
  LevyTriplet atoms;
  atoms.atoms = {{{0.7}, 1.0}, {{-2.0}, 0.5}, {{3.0}, 0.25}};
  atoms.drift = {0.3};
  atoms.Q = {0.5};
  return {SymbolDescriptor::alpha_stable(0.5),       SymbolDescriptor::alpha_stable(1.5),
          SymbolDescriptor::brownian(),              SymbolDescriptor::meixner(1, 1, 1, 0.5),
          SymbolDescriptor::meixner(0, 1, 2, 0),     SymbolDescriptor::nig(0.3, 1, 2, 1),
          SymbolDescriptor::nig(0, 1, 2, -1.5),      SymbolDescriptor::subordinated_drift(0.5),
          SymbolDescriptor::subordinated_drift(0.9), SymbolDescriptor::levy_khintchine(atoms),
          SymbolDescriptor::drift()};
}

// Independent NIG exponent in extended precision.
std::complex<long double> nig_oracle(long double m, long double delta, long double a, long double b,
                                     long double xi) {
  using C = std::complex<long double>;
  C bi{b, xi};
  return C{0, -m * xi} + delta * (std::sqrt(a * a - bi * bi) - std::sqrt(a * a - b * b));
}

}  // namespace

TEST_CASE("catalog values") {
  CHECK_THAT(eval_symbol(SymbolDescriptor::alpha_stable(1.5), 2.0).real(), WithinRel(std::pow(2.0, 1.5), 1e-15));
  CHECK(eval_symbol(SymbolDescriptor::alpha_stable(1.5), 2.0).imag() == 0.0);
  CHECK(eval_symbol(SymbolDescriptor::brownian(), 3.0) == cplx(9.0));

  const std::vector<double> xi2{3.0, 4.0};
  CHECK_THAT(eval_symbol(SymbolDescriptor::alpha_stable(1.5, 2), xi2).real(), WithinRel(std::pow(5.0, 1.5), 1e-14));
  CHECK(eval_symbol(SymbolDescriptor::brownian(2), xi2) == cplx(25.0));

  // Symmetric Meixner: 2δ log cosh(aξ/2).
  CHECK_THAT(eval_symbol(SymbolDescriptor::meixner(0, 1, 2, 0), 1.5).real(),
             WithinRel(2 * std::log(std::cosh(1.5)), 1e-14));
  CHECK(eval_symbol(SymbolDescriptor::meixner(0, 1, 2, 0), 1.5).imag() == 0.0);
  // Far field stays finite where cosh overflows.
  auto far = eval_symbol(SymbolDescriptor::meixner(0, 1, 2, 0), 1e6);
  CHECK_THAT(far.real(), WithinRel(2 * (1e6 - std::log(2.0)), 1e-14));
}

TEST_CASE("NIG agrees with an extended-precision evaluation") {
  const auto s = SymbolDescriptor::nig(0, 1, 2, 1);
  auto ref = nig_oracle(0, 1, 2, 1, 1);
  auto v = eval_symbol(s, 1.0);
  CHECK_THAT(v.real(), WithinRel(static_cast<double>(ref.real()), 1e-14));
  CHECK_THAT(v.imag(), WithinRel(static_cast<double>(ref.imag()), 1e-14));

  const auto s2 = SymbolDescriptor::nig(0.3, 1.7, 2.5, -1.2);
  for (double xi : {-50.0, -3.0, -0.1, 0.25, 1.0, 7.5, 1e3}) {
    auto r = nig_oracle(0.3L, 1.7L, 2.5L, -1.2L, xi);
    auto w = eval_symbol(s2, xi);
    CHECK(std::abs(w - cplx(double(r.real()), double(r.imag()))) <= 1e-13 * std::abs(w));
  }
}

TEST_CASE("psi vanishes at the origin") {
  for (const auto& s : catalog_samples()) {
    INFO(s.name());
    CHECK(eval_symbol(s, 0.0) == cplx(0.0));
  }
  const std::vector<double> z{0.0, 0.0};
  CHECK(eval_symbol(SymbolDescriptor::alpha_stable(1.2, 2), z) == cplx(0.0));
  CHECK(eval_symbol(SymbolDescriptor::brownian(2), z) == cplx(0.0));
}

TEST_CASE("evaluation is bitwise deterministic") {
  for (const auto& s : catalog_samples()) {
    for (double xi : {-7.3, 0.01, 1.0, 123.4}) {
      cplx a = eval_symbol(s, xi), b = eval_symbol(s, xi);
      CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
  }
}

TEST_CASE("parameter domains are enforced") {
  CHECK_THROWS_AS(SymbolDescriptor::alpha_stable(2.5), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::alpha_stable(0.0), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::alpha_stable(2.0), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::meixner(0, 0, 1, 0), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::meixner(0, 1, -1, 0), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::meixner(0, 1, 1, oracle::kPi), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::nig(0, 1, 2, 0), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::nig(0, 1, 2, 2), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::nig(0, -1, 2, 1), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::subordinated_drift(1.2), DescriptorInvalid);
  CHECK_THROWS_AS(SymbolDescriptor::subordinated_drift(0.0), DescriptorInvalid);
  LevyTriplet bad;
  bad.Q = {-1.0};
  CHECK_THROWS_AS(SymbolDescriptor::levy_khintchine(bad), DescriptorInvalid);
  LevyTriplet asym;
  asym.dim = 2;
  asym.Q = {1, 0.5, 0.2, 1};
  CHECK_THROWS_AS(SymbolDescriptor::levy_khintchine(asym), DescriptorInvalid);
}

TEST_CASE("closed-form derivatives") {
  CHECK(symbol_derivative(SymbolDescriptor::brownian(), 3.0, 1) == cplx(6.0));
  CHECK(symbol_derivative(SymbolDescriptor::brownian(), 3.0, 2) == cplx(2.0));
  CHECK_THAT(symbol_derivative(SymbolDescriptor::alpha_stable(1.5), 2.0, 1).real(),
             WithinRel(1.5 * std::sqrt(2.0), 1e-14));
  CHECK_THAT(symbol_derivative(SymbolDescriptor::alpha_stable(1.5), -2.0, 1).real(),
             WithinRel(-1.5 * std::sqrt(2.0), 1e-14));
}

TEST_CASE("Meixner second derivative against a Richardson oracle") {
  // ψ = 2 log cosh(ξ/2) for (m, δ, a, b) = (0, 1, 1, 0); the oracle
  // differentiates this expression directly.
  auto f = [](double x) { return oracle::cplx(2 * std::log(std::cosh(x / 2))); };
  const auto ref = oracle::richardson(f, 1.0, 2, 0.1, 6);
  DerivativeOptions fd;
  fd.force_finite_difference = true;
  const auto s = SymbolDescriptor::meixner(0, 1, 1, 0);
  auto v = symbol_derivative(s, 1.0, 2, fd);
  CHECK(std::abs(v - ref) <= 1e-6 * std::abs(ref));
  const double sech = 1 / std::cosh(0.5);
  CHECK_THAT(symbol_derivative(s, 1.0, 2).real(), WithinRel(0.5 * sech * sech, 1e-14));
}

TEST_CASE("finite differences agree with closed forms") {
  DerivativeOptions fd;
  fd.force_finite_difference = true;
  std::vector<SymbolDescriptor> syms = {
      SymbolDescriptor::alpha_stable(0.5),   SymbolDescriptor::alpha_stable(1.5),
      SymbolDescriptor::brownian(),          SymbolDescriptor::meixner(1, 1, 1, 0.5),
      SymbolDescriptor::meixner(0, 2, 0.5, -1), SymbolDescriptor::nig(0.3, 1, 2, 1),
      SymbolDescriptor::subordinated_drift(0.5), SymbolDescriptor::power(0.75),
      SymbolDescriptor::scaled(SymbolDescriptor::alpha_stable(1.5), 2.0)};
  for (const auto& s : syms) {
    for (double xi : {-40.0, -2.5, -0.3, 0.7, 1.0, 3.0, 250.0}) {
      for (int k : {1, 2}) {
        REQUIRE(has_closed_form_derivative(s, {k}));
        auto exact = symbol_derivative(s, xi, k);
        auto approx = symbol_derivative(s, xi, k, fd);
        // Relative to the derivative or, where it is tiny next to ψ itself
        // (Meixner far field), to the natural scale |ψ(ξ)| / |ξ|^k.
        double scale = std::max(std::abs(exact), std::abs(eval_symbol(s, xi)) / std::pow(std::abs(xi), k));
        INFO(s.name() << " xi=" << xi << " k=" << k << " exact=" << exact << " fd=" << approx);
        CHECK(std::abs(approx - exact) <= 1e-6 * scale);
      }
    }
  }
  // Two-dimensional stable: mixed second derivative.
  const auto s2 = SymbolDescriptor::alpha_stable(1.5, 2);
  const std::vector<double> xi{1.2, -0.7};
  for (MultiIndex a : {MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{2, 0}, MultiIndex{1, 1}, MultiIndex{0, 2}}) {
    auto exact = symbol_derivative(s2, xi, a);
    auto approx = symbol_derivative(s2, xi, a, fd);
    CHECK(std::abs(approx - exact) <= 1e-6 * std::abs(exact));
  }
}

TEST_CASE("derivative errors") {
  const auto s = SymbolDescriptor::alpha_stable(1.5);
  CHECK_THROWS_AS(symbol_derivative(s, 0.0, 1), OriginSingularity);
  CHECK_THROWS_AS(symbol_derivative(s, 1e-9, 1), OriginSingularity);
  CHECK_THROWS_AS(symbol_derivative(SymbolDescriptor::subordinated_drift(0.5), 0.0, 1), OriginSingularity);
  CHECK_NOTHROW(symbol_derivative(SymbolDescriptor::brownian(), 0.0, 1));
  CHECK(symbol_derivative(s, 0.0, 0) == cplx(0.0));
  CHECK_THROWS_AS(symbol_derivative(s, 1.0, 5), UnsupportedOrder);
  DerivativeOptions two;
  two.max_order = 2;
  CHECK_THROWS_AS(symbol_derivative(s, 1.0, 3, two), UnsupportedOrder);
}

TEST_CASE("Levy-Khintchine atoms and Gaussian part") {
  LevyTriplet t;
  t.atoms = {{{1.0}, 1.0}, {{-1.0}, 1.0}};
  const double xi = oracle::kPi;
  CHECK_THAT(levy_khintchine_eval(t, Freq(&xi, 1)).real(), WithinAbs(4.0, 1e-14));
  CHECK_THAT(levy_khintchine_eval(t, Freq(&xi, 1)).imag(), WithinAbs(0.0, 1e-14));

  LevyTriplet g;
  g.drift = {0.0};
  g.Q = {2.0};
  for (double x : {-3.0, 0.5, 10.0}) CHECK(levy_khintchine_eval(g, Freq(&x, 1)) == cplx(x * x));

  // Drift -1 is the symbol iξ.
  CHECK(eval_symbol(SymbolDescriptor::drift(), 2.0) == cplx(0, 2));

  // Compound Poisson in d = 2: rate (1 - e^{iξ·z}) with |z| > 1 needs no compensator.
  LevyTriplet t2;
  t2.dim = 2;
  t2.atoms = {{{1.5, -0.5}, 0.7}};
  const std::vector<double> k{0.4, 2.0};
  const double dot = 0.4 * 1.5 - 2.0 * 0.5;
  auto expect = 0.7 * (1.0 - std::exp(cplx(0, dot)));
  CHECK(std::abs(eval_symbol(SymbolDescriptor::levy_khintchine(t2), k) - expect) < 1e-15);
}

TEST_CASE("truncated stable density matches the catalog stable symbol") {
  const double alpha = 1.5;
  // c from the closed form α / (2 Γ(1-α) cos(πα/2)), computed here with std::tgamma.
  const double c = alpha / (2 * std::tgamma(1 - alpha) * std::cos(oracle::kPi * alpha / 2));
  CHECK_THAT(stable_density_constant(alpha), WithinRel(c, 1e-14));

  LevyTriplet t;
  t.density = [c, alpha](double y) { return c * std::pow(std::abs(y), -1 - alpha); };
  t.support_radius = 10;
  const auto lk = SymbolDescriptor::levy_khintchine(t);
  // Dropped tail: ∫_{|y|>10} (1 - cos ξy) c |y|^{-1-α} dy <= 4c 10^{-α} / α.
  const double tail = 4 * c * std::pow(10.0, -alpha) / alpha;
  for (double xi : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, -2.0}) {
    auto v = eval_symbol(lk, xi);
    INFO("xi=" << xi << " lk=" << v);
    CHECK(std::abs(v - std::pow(std::abs(xi), alpha)) <= tail);
    CHECK(std::abs(v.imag()) < 1e-12);
  }
}

TEST_CASE("untruncated stable density converges to |xi|^alpha") {
  for (double alpha : {0.7, 1.5}) {
    const double c = stable_density_constant(alpha);
    LevyTriplet t;
    t.density = [c, alpha](double y) { return c * std::pow(std::abs(y), -1 - alpha); };
    const auto lk = SymbolDescriptor::levy_khintchine(t);
    for (double xi : {0.5, 1.0, 3.0}) {
      INFO("alpha=" << alpha << " xi=" << xi);
      CHECK_THAT(eval_symbol(lk, xi).real(), WithinRel(std::pow(xi, alpha), 1e-6));
    }
  }
}

TEST_CASE("integrability of the jump measure") {
  LevyTriplet ok;
  ok.density = [](double y) { return std::exp(-std::abs(y)) / std::abs(y); };
  CHECK(std::isfinite(levy_integrability(ok)));
  LevyTriplet heavy;
  heavy.density = [](double y) { return 1.0 / std::abs(y); };  // ∫_1^∞ dy/y diverges
  heavy.support_radius = HUGE_VAL;
  CHECK_THROWS_AS(SymbolDescriptor::levy_khintchine(heavy), DescriptorInvalid);
}

TEST_CASE("subordinated drift") {
  const auto drift = SymbolDescriptor::drift();
  const auto s = subordinate(drift, 0.5);
  CHECK(s.kind() == SymbolKind::SubordinatedDrift);
  auto v = eval_symbol(s, 1.0);
  CHECK_THAT(v.real(), WithinAbs(std::sqrt(0.5), 1e-15));
  CHECK_THAT(v.imag(), WithinAbs(std::sqrt(0.5), 1e-15));
  auto w = eval_symbol(s, -1.0);
  CHECK_THAT(w.real(), WithinAbs(std::sqrt(0.5), 1e-15));
  CHECK_THAT(w.imag(), WithinAbs(-std::sqrt(0.5), 1e-15));

  const auto s7 = subordinate(drift, 0.7);
  auto z = eval_symbol(s7, 2.0);
  CHECK_THAT(std::abs(z), WithinRel(std::pow(2.0, 0.7), 1e-14));
  CHECK_THAT(std::arg(z), WithinRel(0.7 * oracle::kPi / 2, 1e-14));
  auto rep = sector_kappa(s7, FrequencySample::log_radial(1, 1e-3, 1e3, 40));
  CHECK(rep.sectorial);
  CHECK_THAT(rep.kappa, WithinRel(std::tan(0.7 * oracle::kPi / 2), 1e-12));

  CHECK_THROWS_AS(subordinate(drift, 1.0), DescriptorInvalid);
  CHECK_THROWS_AS(subordinate(drift, -0.2), DescriptorInvalid);
  CHECK_THROWS_AS(subordinate(SymbolDescriptor::brownian(), 0.5), DescriptorInvalid);
}

TEST_CASE("Hermitian symmetry on random frequencies") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> logr(-3, 3);
  for (const auto& s : catalog_samples()) {
    INFO(s.name());
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      double xi = std::pow(10.0, logr(gen));
      cplx a = eval_symbol(s, xi), b = eval_symbol(s, -xi);
      worst = std::max(worst, std::abs(b - std::conj(a)) / std::max(std::abs(a), 1e-300));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("symmetric symbols are real") {
  for (const auto& s : catalog_samples()) {
    if (!s.real_symmetric()) continue;
    for (double xi : {-3.0, 0.2, 17.0}) CHECK(eval_symbol(s, xi).imag() == 0.0);
  }
}

TEST_CASE("quadratic growth bound") {
  for (const auto& s : catalog_samples()) {
    double c = 0;
    for (int i = 0; i <= 600; ++i) {
      double xi = std::pow(10.0, -3 + 6.0 * i / 600);
      c = std::max(c, std::abs(eval_symbol(s, xi)) / (1 + xi * xi));
    }
    INFO(s.name() << " C = " << c);
    CHECK(c <= 10);
  }
}

TEST_CASE("Hoh moment diagnostic for a compactly supported jump measure") {
  const double alpha = 1.5, c = stable_density_constant(alpha);
  LevyTriplet t;
  t.density = [c, alpha](double y) { return c * std::pow(std::abs(y), -1 - alpha); };
  t.support_radius = 1.0;
  const auto s = SymbolDescriptor::levy_khintchine(t);
  double worst_low = 0, worst_high = 0;
  for (int i = 0; i <= 24; ++i) {
    double xi = std::pow(10.0, 2.4 * i / 24);
    double d1 = std::abs(symbol_derivative(s, xi, 1));
    double bound = std::sqrt(std::abs(eval_symbol(s, xi))) + 1;
    double& w = xi <= 15 ? worst_low : worst_high;
    w = std::max(w, d1 / bound);
  }
  INFO("low " << worst_low << " high " << worst_high);
  CHECK(worst_high <= 2 * worst_low);
  CHECK(worst_high < 5);
}

TEST_CASE("catalog listing") {
  auto names = symbol_catalog();
  CHECK(std::find(names.begin(), names.end(), "alpha_stable") != names.end());
  CHECK(std::find(names.begin(), names.end(), "meixner") != names.end());
  CHECK(std::find(names.begin(), names.end(), "nig") != names.end());
}
