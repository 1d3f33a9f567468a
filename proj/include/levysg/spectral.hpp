#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levysg/hoh.hpp"
#include "levysg/symbols.hpp"

namespace levysg {

/// Periodic grid on [-L, L)^d, n points per axis; x_j = -L + j 2L/n and
/// ξ_k = πk/L, k in [-n/2, n/2).  Frequency-space fields are stored in FFT
/// order (index m <-> k = m for m < n/2, m - n otherwise), axis 0 slowest.
struct GridSpec {
  int d = 1;
  int n = 256;
  double L = 10.0;

  GridSpec() = default;
  GridSpec(int d_, int n_, double L_);

  std::size_t size() const;
  double dx() const { return 2 * L / n; }
  double dxi() const { return 3.14159265358979323846 / L; }
  double x(int j) const { return -L + j * dx(); }
  int k_of(int m) const { return m < n / 2 ? m : m - n; }
  double xi(int m) const { return k_of(m) * dxi(); }
  double xi_max() const { return (n / 2 - 1) * dxi(); }
  /// Coordinates of flat index idx (physical or frequency).
  void point(std::size_t idx, double* out) const;
  void frequency(std::size_t idx, double* out) const;
  /// Any axis at the unpaired Nyquist mode.
  bool is_nyquist(std::size_t idx) const;
  bool operator==(const GridSpec& o) const { return d == o.d && n == o.n && L == o.L; }
};

enum class Space { Physical, Frequency };

struct Field {
  GridSpec grid;
  std::vector<cplx> values;
  Space space = Space::Physical;

  Field() = default;
  Field(GridSpec g, Space s);
  static Field from_function(const GridSpec& g, const std::function<cplx(Point)>& f);
};

Field fourier_forward(const Field& f);
Field fourier_inverse(const Field& g);

/// Discrete L² norm sqrt((2L/n)^d Σ|f|²) of a physical field.
double l2_norm(const Field& f);
/// Bessel-potential norm via Plancherel over all grid modes.
double sobolev_norm(const Field& f, double s);

void zero_nyquist(Field& freq_field);

using Multiplier = std::function<cplx(Freq)>;

struct MultiplierOptions {
  std::optional<cplx> origin_value;
};

/// Multiplier values on the grid in FFT order, Nyquist zeroed.  Throws
/// EvaluationError naming the frequency if a value is not finite.
std::vector<cplx> multiplier_on_grid(const Multiplier& m, const GridSpec& g,
                                     const MultiplierOptions& opt = {});
Multiplier symbol_multiplier(const SymbolDescriptor& s, double scale = 1.0);

/// F⁻¹(m F f); input and output physical.
Field apply_multiplier(const Multiplier& m, const Field& f, const MultiplierOptions& opt = {});
Field apply_multiplier_values(const std::vector<cplx>& values, const Field& f);

struct PdoOptions {
  bool allow_large = false;
  int jobs = 1;
};

/// Kohn–Nirenberg quadrature Σ_k e^{ixξ_k} a(x, ξ_k) f̂(ξ_k) (π/L)^d at each grid x.
Field apply_pdo(const HohSymbol& a, const Field& f, const PdoOptions& opt = {});

struct NormBoundOptions {
  int n_x = 33;
  int n_radii = 61;
  double xi_lo = 1e-3, xi_hi = 1e3;
  double x_half_width = 3.14159265358979323846;
};

/// sup over sampled (x, ξ), |α|, |β| <= k of |ξ|^{|α|} |∂_x^β ∂_ξ^α a|.
double operator_norm_bound(const HohSymbol& a, int k, const NormBoundOptions& opt = {});

/// Peetre constant: max over pairs of <ξ+η>^s / (<ξ>^s <η>^{|s|}).
double peetre_ratio(double s, double xi, double eta);

void write_field_csv(const std::string& path, const Field& f, const std::string& comment = "");
void write_field_binary(const std::string& path, const Field& f);
Field read_field_binary(const std::string& path, Space space = Space::Physical);

}  // namespace levysg
