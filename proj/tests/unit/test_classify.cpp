#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "levysg/classify.hpp"
#include "levysg/hoh.hpp"
#include "oracles.hpp"

using namespace levysg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

IndexOptions window(double lo, double hi) {
  IndexOptions o;
  o.window_lo = lo;
  o.window_hi = hi;
  return o;
}

std::vector<std::vector<double>> random_points(std::mt19937_64& gen, int m, int d, double scale) {
  std::normal_distribution<double> nd(0, scale);
  std::vector<std::vector<double>> pts(m, std::vector<double>(d));
  for (auto& p : pts)
    for (auto& v : p) v = nd(gen);
  return pts;
}

}  // namespace

TEST_CASE("index of the stable family") {
  auto rep = estimate_bg_index(SymbolDescriptor::alpha_stable(1.5), 0, window(10, 1e4));
  CHECK_THAT(rep.s, WithinAbs(1.5, 0.02));
  for (double a : {0.5, 1.0, 1.5, 1.9}) {
    auto r = estimate_bg_index(SymbolDescriptor::alpha_stable(a), 1);
    INFO("alpha " << a);
    CHECK_THAT(r.s, WithinAbs(a, 0.02));
    CHECK_FALSE(r.unreliable);
  }
}

TEST_CASE("index of Meixner and NIG") {
  auto m = estimate_bg_index(SymbolDescriptor::meixner(0, 1, 2, 0), 0, window(1e2, 1e5));
  CHECK_THAT(m.s, WithinAbs(1.0, 0.05));
  auto n = estimate_bg_index(SymbolDescriptor::nig(0, 1, 2, 1), 0, window(1e2, 1e5));
  CHECK_THAT(n.s, WithinAbs(1.0, 0.05));
}

TEST_CASE("Brownian index is exactly 2 with slopes 2, 1, 0") {
  auto rep = estimate_bg_index(SymbolDescriptor::brownian(), 2);
  CHECK_THAT(rep.s, WithinAbs(2.0, 1e-10));
  REQUIRE(rep.per_alpha.size() == 3);
  for (const auto& f : rep.per_alpha) {
    CHECK_THAT(f.exponent, WithinAbs(2.0, 1e-10));
    CHECK(f.residual < 1e-10);
  }
}

TEST_CASE("index envelopes and scaling covariance") {
  for (const auto& s : {SymbolDescriptor::alpha_stable(0.8), SymbolDescriptor::meixner(1, 1, 1, 0.3),
                        SymbolDescriptor::nig(0.2, 1, 2, 1)}) {
    auto base = estimate_bg_index(s, 1);
    INFO(s.name());
    // Envelope slopes come from separate regressions, so the ordering holds
    // up to the fit tolerance.
    CHECK(base.s_minus <= base.s + 0.01);
    CHECK(base.s <= base.s_plus + 0.01);
    for (double c : {0.1, 3.0, 10.0}) {
      auto scaled = estimate_bg_index(SymbolDescriptor::scaled(s, c), 1);
      CHECK_THAT(scaled.s, WithinAbs(base.s, 0.02));
    }
  }
}

TEST_CASE("two-dimensional index reports direction spread") {
  auto rep = estimate_bg_index(SymbolDescriptor::alpha_stable(1.2, 2), 2);
  CHECK_THAT(rep.s, WithinAbs(1.2, 0.02));
  for (const auto& f : rep.per_alpha) CHECK(f.direction_spread >= 0);
}

TEST_CASE("degenerate derivatives fit to minus infinity") {
  // Third derivative of |ξ|² is identically zero.
  auto rep = estimate_bg_index(SymbolDescriptor::brownian(), 3);
  REQUIRE(rep.per_alpha.size() == 4);
  CHECK(std::isinf(rep.per_alpha[3].exponent));
  CHECK(rep.per_alpha[3].exponent < 0);
  CHECK_THAT(rep.s, WithinAbs(2.0, 1e-10));
}

TEST_CASE("index window preconditions") {
  CHECK_THROWS_AS(estimate_bg_index(SymbolDescriptor::brownian(), 0, window(0.5, 10)), DescriptorInvalid);
  CHECK_THROWS_AS(estimate_bg_index(SymbolDescriptor::brownian(), 0, window(10, 10)), DescriptorInvalid);
}

TEST_CASE("sector of real and drift symbols") {
  const auto sample = FrequencySample::log_radial(1, 1e-3, 1e3, 61);
  auto st = sector_kappa(SymbolDescriptor::alpha_stable(1.5), sample);
  CHECK(st.sectorial);
  CHECK(st.kappa == 0.0);
  CHECK(st.theta == 0.0);

  auto dr = sector_kappa(SymbolDescriptor::drift(), sample);
  CHECK_FALSE(dr.sectorial);
  CHECK(std::isinf(dr.kappa));
}

TEST_CASE("Meixner sector angle tends to arctan(m / (delta a))") {
  const auto far = FrequencySample::log_radial(1, 1e3, 1e6, 61);
  auto rep = sector_kappa(SymbolDescriptor::meixner(1, 1, 1, 0), far);
  REQUIRE(rep.sectorial);
  CHECK_THAT(rep.theta, WithinAbs(oracle::kPi / 4, 0.02));
  // Far-field κ of -imξ + 2δ log cosh(aξ/2) is m / (δa) up to O(1/|ξ|).
  CHECK_THAT(rep.kappa, WithinAbs(1.0, 2e-3));
}

TEST_CASE("theta equals arctan(kappa) exactly") {
  const auto sample = FrequencySample::log_radial(1, 1e-2, 1e4, 41);
  for (const auto& s : {SymbolDescriptor::meixner(0.5, 2, 1, 0.4), SymbolDescriptor::nig(0.3, 1, 2, 1),
                        SymbolDescriptor::subordinated_drift(0.6), SymbolDescriptor::brownian()}) {
    auto rep = sector_kappa(s, sample);
    REQUIRE(rep.sectorial);
    CHECK(rep.theta == std::atan(rep.kappa));
    CHECK(rep.resolvent_angle == oracle::kPi / 2 - rep.theta);
  }
}

TEST_CASE("symmetric catalog symbols have kappa zero") {
  const auto sample = FrequencySample::log_radial(1, 1e-3, 1e4, 41);
  for (const auto& s : {SymbolDescriptor::alpha_stable(0.3), SymbolDescriptor::alpha_stable(1.9),
                        SymbolDescriptor::brownian(), SymbolDescriptor::meixner(0, 1, 3, 0)}) {
    CHECK(sector_kappa(s, sample).kappa == 0.0);
  }
}

TEST_CASE("negative definiteness") {
  std::mt19937_64 gen(7);
  auto pts = random_points(gen, 12, 1, 3);
  CHECK(check_negative_definite(SymbolDescriptor::brownian(), pts).negative_definite);

  auto neg = SymbolDescriptor::custom("neg_brownian", 1, [](Freq xi) { return cplx(-xi[0] * xi[0]); });
  auto r = check_negative_definite(neg, pts);
  CHECK_FALSE(r.negative_definite);
  CHECK(r.min_eigenvalue < 0);

  auto nig = check_negative_definite(SymbolDescriptor::nig(0, 1, 2, 1), random_points(gen, 16, 1, 3));
  CHECK(nig.negative_definite);
  CHECK(nig.min_eigenvalue >= -1e-10);

  CHECK_THROWS_AS(check_negative_definite(SymbolDescriptor::brownian(), random_points(gen, 1, 1, 1)),
                  DescriptorInvalid);
  CHECK_THROWS_AS(check_negative_definite(SymbolDescriptor::brownian(), random_points(gen, 65, 1, 1)),
                  DescriptorInvalid);
}

TEST_CASE("every catalog symbol is negative definite on random point sets") {
  LevyTriplet atoms;
  atoms.atoms = {{{0.7}, 1.0}, {{-2.0}, 0.5}};
  atoms.drift = {0.3};
  std::vector<SymbolDescriptor> syms = {
      SymbolDescriptor::alpha_stable(0.5),  SymbolDescriptor::alpha_stable(1.5),
      SymbolDescriptor::brownian(),         SymbolDescriptor::meixner(1, 1, 1, 0.5),
      SymbolDescriptor::nig(0.3, 1, 2, 1),  SymbolDescriptor::subordinated_drift(0.5),
      SymbolDescriptor::levy_khintchine(atoms), SymbolDescriptor::drift()};
  std::mt19937_64 gen(99);
  for (const auto& s : syms) {
    double worst = HUGE_VAL;
    for (int trial = 0; trial < 20; ++trial) {
      auto r = check_negative_definite(s, random_points(gen, 10, 1, 2));
      worst = std::min(worst, r.min_eigenvalue);
    }
    INFO(s.name() << " min eigenvalue " << worst);
    CHECK(worst >= -1e-10);
  }
  auto s2 = SymbolDescriptor::alpha_stable(1.3, 2);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(check_negative_definite(s2, random_points(gen, 10, 2, 2)).negative_definite);
}

TEST_CASE("small-frequency growth") {
  auto a = check_small_xi_growth(SymbolDescriptor::alpha_stable(1.5), 1.5, 1);
  CHECK(a.bounded);
  CHECK_THAT(a.sup, WithinRel(1.5, 1e-9));

  auto b = check_small_xi_growth(SymbolDescriptor::alpha_stable(0.5), 1.5, 1);
  CHECK_FALSE(b.bounded);
  // 0.5 |ξ|^{-1} at the smallest radius 1e-6.
  CHECK(b.sup >= 0.5e6 * 0.99);

  auto c = check_small_xi_growth(SymbolDescriptor::brownian(), 2, 2);
  CHECK(c.bounded);
  CHECK(c.sup <= 2 + 1e-12);

  CHECK_THROWS_AS(check_small_xi_growth(SymbolDescriptor::brownian(), 0, 1), DescriptorInvalid);
}

TEST_CASE("Hoh class membership") {
  auto coeff = CoefficientField::scalar(ScalarField::two_plus_sin(), ScalarField::constant(1), 1, 3);
  auto a = make_hoh_symbol(SymbolDescriptor::alpha_stable(1.5), coeff);
  auto rep = check_hoh_class(a, 1.5, 1, 0, 2);
  CHECK(rep.member);
  CHECK(rep.entries.size() == 9);

  auto one = HohSymbol::from_function("one", 1, [](Point, Freq) { return cplx(1.0); }, true);
  auto r1 = check_hoh_class(one, 0, 1, 0, 2);
  CHECK(r1.member);
  for (const auto& e : r1.entries) {
    const bool zeroth = e.alpha[0] == 0 && e.beta[0] == 0;
    if (!zeroth) {
      CHECK(e.small_xi_constant == 0.0);
      CHECK(e.large_xi_constant == 0.0);
    }
  }

  auto half = make_hoh_symbol(SymbolDescriptor::alpha_stable(0.5), CoefficientField::constant(1.0));
  auto r2 = check_hoh_class(half, 0.5, 1, 0, 1);
  CHECK(r2.member);
  for (const auto& e : r2.entries)
    if (e.alpha[0] == 1 && e.beta[0] == 0) CHECK_THAT(e.small_xi_constant, WithinRel(0.5, 1e-6));
}

TEST_CASE("class inheritance from the index") {
  for (double s : {0.7, 1.5}) {
    auto a = make_hoh_symbol(SymbolDescriptor::alpha_stable(s),
                             CoefficientField::scalar(ScalarField::two_plus_sin(), ScalarField::constant(1), 1, 3));
    INFO("s " << s);
    CHECK(check_hoh_class(a, s, 1, 0, 1).member);
  }
}

TEST_CASE("multi-index enumeration") {
  CHECK(multi_indices(1, 3).size() == 4);
  CHECK(multi_indices(2, 2).size() == 6);
}
