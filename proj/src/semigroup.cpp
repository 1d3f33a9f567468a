#include "levysg/semigroup.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace levysg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGrowthFloor = -1e-12;
constexpr double kSpectrumMargin = 1e-10;
constexpr double kDoublingTol = 1e-6;
constexpr int kMaxDoublings = 3;

std::vector<cplx> symbol_on_grid(const SymbolDescriptor& psi, double sigma, const GridSpec& g) {
  return multiplier_on_grid(symbol_multiplier(psi, sigma), g);
}

// 8-point Gauss–Legendre rule on [-1, 1] by Newton iteration on P_8.
struct GaussLegendre8 {
  std::array<double, 8> x{}, w{};
  GaussLegendre8() {
    const int n = 8;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2 / ((1 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre8& gl8() {
  static const GaussLegendre8 rule;
  return rule;
}

struct Node {
  cplx lambda;  // contour point (before ω shift)
  cplx weight;  // dλ weight including orientation
};

// Composite 8-point panels on [a, b].
template <class F>
void panels(double a, double b, int n_nodes, F&& emit) {
  const auto& q = gl8();
  const int P = std::max(1, (n_nodes + 7) / 8);
  const double hpan = (b - a) / P;
  for (int p = 0; p < P; ++p) {
    double lo = a + p * hpan;
    for (int i = 0; i < 8; ++i) emit(lo + 0.5 * hpan * (q.x[i] + 1), 0.5 * hpan * q.w[i]);
  }
}

std::vector<Node> contour_nodes(const ContourSpec& c) {
  std::vector<Node> nodes;
  const double phi = kPi / 2 + c.theta_prime;
  const cplx up = std::polar(1.0, phi), dn = std::polar(1.0, -phi);
  // Rays in log r.
  panels(std::log(c.rho), std::log(c.r_max), c.n_ray, [&](double s, double w) {
    double r = std::exp(s);
    nodes.push_back({r * up, up * r * w});    // outward on the upper ray
    nodes.push_back({r * dn, -dn * r * w});   // inward on the lower ray
  });
  panels(-phi, phi, c.n_arc, [&](double a, double w) {
    cplx e = std::polar(1.0, a);
    nodes.push_back({c.rho * e, cplx{0, 1} * c.rho * e * w});
  });
  return nodes;
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

Field multiplier_semigroup(const SymbolDescriptor& psi, double sigma, double t, const Field& u) {
  if (!(t >= 0)) throw DescriptorInvalid("time must be nonnegative");
  if (t == 0) return u.space == Space::Physical ? u : fourier_inverse(u);
  auto vals = symbol_on_grid(psi, sigma, u.grid);
  double xi[2];
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (u.grid.is_nyquist(i)) continue;
    if (vals[i].real() < kGrowthFloor) {
      u.grid.frequency(i, xi);
      std::ostringstream os;
      os << "Re psi = " << vals[i].real() << " < 0 at xi = " << xi[0]
         << "; exp(-t psi) would amplify this mode";
      throw Instability(os.str());
    }
    vals[i] = std::exp(-t * vals[i]);
  }
  return apply_multiplier_values(vals, u);
}

Field resolvent_apply(const SymbolDescriptor& psi, double sigma, cplx lambda, const Field& u) {
  auto vals = symbol_on_grid(psi, sigma, u.grid);
  double xi[2];
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (u.grid.is_nyquist(i)) continue;
    cplx den = lambda + vals[i];
    if (std::abs(den) < kSpectrumMargin) {
      u.grid.frequency(i, xi);
      std::ostringstream os;
      os << "lambda = " << lambda << " lies within 1e-10 of the spectrum point " << -vals[i]
         << " (xi = " << xi[0] << ")";
      throw NearSpectrum(os.str());
    }
    vals[i] = 1.0 / den;
  }
  return apply_multiplier_values(vals, u);
}

ContourSpec resolve_contour_spec(const ContourSpec& spec, const SectorReport& sector, double t) {
  if (!(t > 0)) throw DescriptorInvalid("contour engine needs t > 0");
  if (!sector.sectorial)
    throw HypothesisViolation("symbol is not sectorial on the grid; the contour representation does not apply");
  ContourSpec c = spec;
  if (std::isnan(c.theta_prime)) c.theta_prime = sector.resolvent_angle / 2;
  if (!(c.theta_prime > 0 && c.theta_prime < sector.resolvent_angle)) {
    std::ostringstream os;
    os << "theta_prime = " << c.theta_prime << " must lie in (0, " << sector.resolvent_angle
       << ") for this symbol";
    throw HypothesisViolation(os.str());
  }
  if (std::isnan(c.rho)) c.rho = 1.0 / t;
  if (!(c.rho > 0)) throw DescriptorInvalid("contour arc radius must be positive");
  if (std::isnan(c.r_max)) c.r_max = 1.05 * 16 * std::log(10.0) / (t * std::sin(c.theta_prime));
  c.r_max = std::max(c.r_max, 2 * c.rho);
  c.n_ray = std::max(8, (c.n_ray + 7) / 8 * 8);
  c.n_arc = std::max(8, (c.n_arc + 7) / 8 * 8);
  return c;
}

std::vector<cplx> contour_exponential(const std::vector<cplx>& psi_values, double t, const ContourSpec& c) {
  const auto nodes = contour_nodes(c);
  const cplx scale = 1.0 / cplx{0, 2 * kPi};
  std::vector<cplx> ew(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j)
    ew[j] = std::exp((nodes[j].lambda + c.omega_shift) * t) * nodes[j].weight * scale;
  std::vector<cplx> out(psi_values.size());
  for (std::size_t i = 0; i < psi_values.size(); ++i) {
    const cplx shift = psi_values[i] + c.omega_shift;
    cplx acc = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += ew[j] / (nodes[j].lambda + shift);
    out[i] = acc;
  }
  return out;
}

ContourResult contour_semigroup(const SymbolDescriptor& psi, double sigma, const Multiplier& B, double t,
                                const Field& u, const ContourSpec& spec) {
  const GridSpec& g = u.grid;
  auto vals = symbol_on_grid(psi, sigma, g);

  // Sector of ψ(σ·) over the grid frequencies, origin excluded.
  FrequencySample sample;
  sample.description = "grid frequencies";
  double xi[2];
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g.is_nyquist(i)) continue;
    g.frequency(i, xi);
    sample.points.emplace_back(xi, xi + g.d);
  }
  auto scaled = sigma == 1.0 ? psi : SymbolDescriptor::scaled(psi, sigma);
  ContourResult res;
  res.sector = sector_kappa(scaled, sample, spec.omega_shift);
  res.spec = resolve_contour_spec(spec, res.sector, t);

  std::vector<cplx> bvals(g.size(), 1.0);
  if (B) bvals = multiplier_on_grid(B, g);
  Field hat = u.space == Space::Frequency ? u : fourier_forward(u);

  auto assemble = [&](const ContourSpec& c) {
    auto w = contour_exponential(vals, t, c);
    Field out = hat;
    for (std::size_t i = 0; i < w.size(); ++i)
      out.values[i] = g.is_nyquist(i) ? 0.0 : out.values[i] * w[i] * bvals[i];
    return out;
  };
  Field base = assemble(res.spec);
  if (res.spec.certify) {
    // Poles close to the arc slow the panel rule down; refine a few times
    // before giving up.
    Field f2;
    for (int round = 0; round < kMaxDoublings; ++round) {
      ContourSpec fine = res.spec;
      fine.n_ray *= 2;
      fine.n_arc *= 2;
      f2 = assemble(fine);
      res.residual = rel_l2(base.values, f2.values);
      if (res.residual <= kDoublingTol) break;
      if (round + 1 < kMaxDoublings) {
        res.spec = fine;
        base = f2;
      }
    }
    if (res.residual > kDoublingTol) {
      std::ostringstream os;
      os << "contour quadrature residual " << res.residual << " exceeds 1e-6 under node doubling";
      throw NonConvergence(os.str(), res.residual);
    }
    base = std::move(f2);
  }
  res.field = fourier_inverse(base);
  return res;
}

}  // namespace levysg
