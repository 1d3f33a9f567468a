#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "levysg/classify.hpp"
#include "levysg/hoh.hpp"
#include "levysg/semigroup.hpp"
#include "levysg/spectral.hpp"
#include "levysg/symbols.hpp"

namespace levysg {

enum class Engine { Multiplier, Contour, MonteCarlo };
const char* engine_name(Engine e);
Engine engine_from_name(const std::string& name);

/// Field with û(ξ) = ⟨ξ⟩^{-(ρ+1)} on every non-Nyquist mode.
Field broadband_field(const GridSpec& g, double rho);

/// Gaussian packets exp(-(x-x0)²/2w²) e^{ikx} in d = 1, one per carrier k.
std::vector<Field> wave_packets(const GridSpec& g, double x0, double width, const std::vector<double>& carriers);

struct McSettings {
  long paths = 4000;
  double h_fraction = 0.25;  // h = t * h_fraction
  std::uint64_t seed = 1;
};

struct PacketSettings {
  double center = -1.5707963267948966;  // where 2 + sin x has its minimum
  double width = 1.0;
  double carrier_lo = 2, carrier_hi = 60;
  int n_carriers = 16;
};

struct SmoothingSpec {
  SymbolDescriptor psi = SymbolDescriptor::power(1.5);
  SymbolDescriptor q = SymbolDescriptor::power(0.5);
  CoefficientField coeff = CoefficientField::constant(1.0);
  double rho = 0;
  GridSpec grid{1, 16384, 32.0};
  std::vector<double> t_values;  // default: 16 log-spaced in [1e-3, 1]
  Engine engine = Engine::Multiplier;
  bool borderline = false;
  ContourSpec contour;
  McSettings mc;
  PacketSettings packets;
  std::optional<Field> u;  // default: broadband_field(grid, rho)
  int jobs = 1;
};

struct SmoothingResult {
  double rho = 0;
  std::string engine;
  std::vector<double> t_values;
  std::vector<double> norms;        // |B P_t u|_{H^ρ}
  std::vector<double> ratio;        // H^ρ -> H^ρ gain of B P_t on the grid
  std::vector<double> field_ratio;  // norms / |u|_{H^ρ}
  std::vector<double> constants;    // ratio * t^{gamma_predicted}
  std::vector<double> local_slope;  // -d log ratio / d log t between neighbours
  double u_norm = 0;
  double gamma_fit = 0;
  double gamma_predicted = 0;
  double fit_residual = 0;
  bool fit_flagged = false;
  double s1 = 0, s2 = 0;
  IndexReport psi_index, q_index;
  SectorReport sector;
  double xi_max = 0;
  double r_star_max = 0;  // maximizer at the smallest t
  bool window_ok = true;
  double contour_residual = 0;  // largest node-doubling residual (contour engine)
  std::vector<long> mc_excluded;
  bool hypothesis_warning = false;
  std::vector<std::string> warnings;
};

/// Fitted decay of ‖B P_t‖ in H^ρ against t.
SmoothingResult smoothing_rate(const SmoothingSpec& spec);

struct ResolventSpec {
  SymbolDescriptor psi = SymbolDescriptor::power(2.0);
  SymbolDescriptor q = SymbolDescriptor::power(1.0);
  double rho = 0;
  GridSpec grid{1, 16384, 32.0};
  double ray_angle = 0;  // arg λ
  double lambda_lo = std::numeric_limits<double>::quiet_NaN();  // default: maximizer at 0.5
  double lambda_hi = std::numeric_limits<double>::quiet_NaN();  // default: 1e3 * lambda_lo
  int n_points = 16;
  std::optional<Field> u;
  int jobs = 1;
};

struct ResolventDecayResult {
  double rho = 0;
  double ray_angle = 0;
  std::vector<cplx> lambda_values;
  std::vector<double> abs_lambda;
  std::vector<double> norms;
  std::vector<double> ratio;  // sup over modes of |q / (λ + ψ)|
  std::vector<double> field_ratio;
  double slope_fit = 0;
  double slope_predicted = 0;  // s₂/s₁ - 1
  double fit_residual = 0;
  bool fit_flagged = false;
  double s1 = 0, s2 = 0;
  SectorReport sector;
  std::vector<std::string> warnings;
};

ResolventDecayResult resolvent_decay(const ResolventSpec& spec);

/// Largest admissible ray angle strictly inside the resolvent sector: π/2 + resolvent_angle/2.
double interior_ray_angle(const SectorReport& s);

struct MaximizerResult {
  double s1 = 0, s2 = 0, lambda = 0;
  double analytic = 0;
  double numeric = 0;
  double rel_error = 0;
};

/// argmax of ξ^{s₂}/(λ + ξ^{s₁}): closed form vs dense log grid plus Brent polish.
MaximizerResult maximizer_check(double s1, double s2, double lambda);

struct GeneratorPoint {
  std::vector<double> x;
  SymbolEstimate estimate;
};

struct GeneratorReport {
  std::vector<GeneratorPoint> points;
  double max_deviation = 0;
  double max_band_fraction = 0;  // max deviation / band over points with band > 0
  bool pass = false;
};

GeneratorReport generator_consistency(const SdeSpec& sde, const std::vector<std::vector<double>>& xs,
                                      const std::vector<std::vector<double>>& xis, double t);

/// sup over |λ| on the rays arg λ = ±(π/2 + θ') of |λ|^{1-ε} sup_ξ |q/(λ+ψ)|.
double measured_resolvent_constant(const SymbolDescriptor& psi, const SymbolDescriptor& q, const GridSpec& g,
                                   double theta_prime, double eps);

struct ContourBoundReport {
  double eps = 0, theta_prime = 0;
  double resolvent_constant = 0;
  double prefactor = 0;  // Γ(ε)/π (sin θ')^{-ε} C
  std::vector<double> t_values, measured, bound;
  bool holds = false;
};

/// Measured ‖T(t)B‖ on the grid against the contour-integral bound.
ContourBoundReport contour_bound_check(const SymbolDescriptor& psi, const SymbolDescriptor& q,
                                       const GridSpec& g, double theta_prime, double eps,
                                       const std::vector<double>& t_values);

struct SectorConstantEntry {
  double alpha = 0;
  double theta_prime = 0;
  double constant = 0;   // sup_t t^{1/2} ‖B P_t‖ on the grid
  double prefactor = 0;  // constant / sin θ'
};

/// Subordinated drifts (iξ)^α with q = |ξ|^{α/2}, θ' = resolvent_angle / 2.
std::vector<SectorConstantEntry> sector_constant_study(const std::vector<double>& alphas, const GridSpec& g);

}  // namespace levysg
