#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "levysg/classify.hpp"
#include "levysg/hoh.hpp"
#include "levysg/rng.hpp"
#include "levysg/spectral.hpp"
#include "levysg/symbols.hpp"

namespace levysg {

// ------------------------------------------------------------ multiplier engine

/// e^{-tψ(σξ)} applied as a Fourier multiplier.
Field multiplier_semigroup(const SymbolDescriptor& psi, double sigma, double t, const Field& u);

/// (λ + ψ(σξ))^{-1} applied as a Fourier multiplier.
Field resolvent_apply(const SymbolDescriptor& psi, double sigma, cplx lambda, const Field& u);

// ---------------------------------------------------------------- contour engine

struct ContourSpec {
  double theta_prime = std::numeric_limits<double>::quiet_NaN();  // default: resolvent_angle / 2
  double rho = std::numeric_limits<double>::quiet_NaN();          // default: 1 / t
  double r_max = std::numeric_limits<double>::quiet_NaN();        // default: e^{-r t sin θ'} < 1e-16
  int n_ray = 200;  // per ray, rounded up to a multiple of 8
  int n_arc = 64;
  double omega_shift = 0;
  bool certify = true;  // node-doubling check
};

struct ContourResult {
  Field field;
  double residual = 0;  // relative L² change under node doubling (0 if not certified)
  ContourSpec spec;     // with defaults resolved
  SectorReport sector;
};

/// Fills unset fields of spec for a symbol with the given sector report.
ContourSpec resolve_contour_spec(const ContourSpec& spec, const SectorReport& sector, double t);

/// Contour approximation of e^{-tψ} for each value ψ in psi_values.
std::vector<cplx> contour_exponential(const std::vector<cplx>& psi_values, double t,
                                      const ContourSpec& resolved);

/// (1/2πi) ∫_Γ e^{λt} (λ + ψ(σξ))^{-1} B u dλ over two rays and an arc.
/// B is a frequency multiplier (identity if empty).
ContourResult contour_semigroup(const SymbolDescriptor& psi, double sigma, const Multiplier& B, double t,
                                const Field& u, const ContourSpec& spec = {});

// ---------------------------------------------------------------- Monte Carlo

/// One increment L(h) with E e^{iξL(h)} = e^{-hψ(ξ)}; out has driver.dim() entries.
void sample_increment(const SymbolDescriptor& driver, double h, Philox4x64& rng, double* out);
double sample_increment(const SymbolDescriptor& driver, double h, Philox4x64& rng);

struct SdeSpec {
  SymbolDescriptor driver = SymbolDescriptor::brownian();
  CoefficientField coeff = CoefficientField::constant(1.0);
  double h = 0.01;
  long paths = 10000;
  std::uint64_t seed = 1;
  int jobs = 1;

  void validate() const;
};

using TestFunction = std::function<cplx(Point)>;

struct McResult {
  std::vector<cplx> mean;
  std::vector<double> std_error;
  std::vector<long> n_excluded;
};

/// E f(X^x(t)) by Euler steps with exact-in-law increments, for each x.
/// All starting points share the per-path increment streams.
McResult mc_semigroup(const SdeSpec& sde, const TestFunction& f, double t,
                      const std::vector<std::vector<double>>& xs);
std::vector<McResult> mc_semigroup_multi(const SdeSpec& sde, const std::vector<TestFunction>& fs, double t,
                                         const std::vector<std::vector<double>>& xs);

struct SymbolEstimate {
  std::vector<double> xi;
  cplx estimate = 0;
  double std_error = 0;
  cplx target = 0;      // ψ(σᵀ(x) ξ)
  double bias_bound = 0;  // t |target|^2 / 2
  double band = 0;      // bias_bound + 3 stderr
  double deviation = 0;
  bool inside = false;
};

/// -(1/t)(mean e^{i(X^x(t)-x)·ξ} - 1) for each ξ.  Requires t <= 0.01 and paths >= 1e5.
std::vector<SymbolEstimate> mc_symbol_extraction(const SdeSpec& sde, const std::vector<double>& x,
                                                 const std::vector<std::vector<double>>& xis, double t);

}  // namespace levysg
