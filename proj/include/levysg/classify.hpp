#pragma once

#include <string>
#include <utility>
#include <vector>

#include "levysg/hoh.hpp"
#include "levysg/symbols.hpp"

namespace levysg {

struct AlphaFit {
  MultiIndex alpha;
  double exponent = 0;        // slope + |α| of the mean fit; -inf if degenerate
  double exponent_plus = 0;   // upper dyadic envelope
  double exponent_minus = 0;  // lower dyadic envelope
  double residual = 0;        // RMS of the log-log fit
  double direction_spread = 0;  // max - min of per-direction slopes (d >= 2)
  bool unreliable = false;
};

struct IndexReport {
  int order = 0;
  std::vector<AlphaFit> per_alpha;
  double s = 0, s_plus = 0, s_minus = 0;
  double window_lo = 0, window_hi = 0;
  bool unreliable = false;
};

struct IndexOptions {
  double window_lo = 1e2;
  double window_hi = 1e5;
  int n_points = 64;
  int n_directions = 8;  // d = 2
  DerivativeOptions derivative{};
};

IndexReport estimate_bg_index(const SymbolDescriptor& desc, int k, const IndexOptions& opt = {});

/// Frequency points used by sector and growth checks.
struct FrequencySample {
  std::vector<std::vector<double>> points;
  std::string description;

  /// Log-spaced radii in [lo, hi], directions ±1 (d = 1) or 8 angles (d = 2).
  static FrequencySample log_radial(int dim, double lo, double hi, int n_radii);
};

struct SectorReport {
  bool sectorial = true;
  double kappa = 0;             // +inf when not sectorial
  double theta = 0;             // arctan(kappa); NaN when not sectorial
  double resolvent_angle = 0;   // π/2 - theta: opening of the resolvent sector beyond π/2
  double omega = 0;
  std::string grid;
};

SectorReport sector_kappa(const SymbolDescriptor& desc, const FrequencySample& sample, double omega = 0);

struct NegDefReport {
  bool negative_definite = false;
  double min_eigenvalue = 0;
};

NegDefReport check_negative_definite(const SymbolDescriptor& desc,
                                     const std::vector<std::vector<double>>& points);

struct SmallXiReport {
  double sup = 0;
  bool bounded = false;
  double ceiling = 1e3;
  double radius_floor = 1e-6;  // radii below are excluded
  std::string note;
};

SmallXiReport check_small_xi_growth(const SymbolDescriptor& desc, double gamma, int k,
                                    double ceiling = 1e3);

struct HohClassEntry {
  MultiIndex alpha, beta;
  double small_xi_constant = 0;
  double large_xi_constant = 0;
};

struct HohClassReport {
  std::vector<HohClassEntry> entries;
  bool member = false;
  double ceiling = 1e3;
};

struct HohClassOptions {
  std::vector<std::vector<double>> x_sample;  // default: 17 points in [-π, π]
  double small_lo = 1e-6;
  double large_hi = 1e4;
  int n_radii = 41;
  double ceiling = 1e3;
};

HohClassReport check_hoh_class(const HohSymbol& h, double m, double rho, double delta, int k,
                               const HohClassOptions& opt = {});

/// All multi-indices of dimension d with |α| <= k.
std::vector<MultiIndex> multi_indices(int d, int k);

}  // namespace levysg
