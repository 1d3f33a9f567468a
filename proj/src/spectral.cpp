#include "levysg/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include <fftw3.h>

#include "levysg/parallel.hpp"

namespace levysg {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans are created once per (d, n, sign) and executed on caller buffers via
// the new-array interface, which FFTW documents as thread-safe.
fftw_plan get_plan(int d, int n, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto key = std::make_tuple(d, n, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  fftw_complex* buf = fftw_alloc_complex(total);
  std::vector<int> dims(d, n);
  fftw_plan p = fftw_plan_dft(d, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  plans.emplace(key, p);
  return p;
}

void run_fft(std::vector<cplx>& data, const GridSpec& g, int sign) {
  fftw_plan p = get_plan(g.d, g.n, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

// (-1)^{k_0 + ... + k_{d-1}} for flat index idx; identical in physical and
// frequency indexing since n is even.
double parity(const GridSpec& g, std::size_t idx) {
  int s = 0;
  for (int a = 0; a < g.d; ++a) {
    s += static_cast<int>(idx % g.n);
    idx /= g.n;
  }
  return (s % 2) ? -1.0 : 1.0;
}

}  // namespace

GridSpec::GridSpec(int d_, int n_, double L_) : d(d_), n(n_), L(L_) {
  if (d < 1 || d > 2) throw DescriptorInvalid("grid dimension must be 1 or 2");
  if (n < 16 || (n & (n - 1)) != 0) throw DescriptorInvalid("grid size must be a power of two >= 16");
  if (!(L > 0) || !std::isfinite(L)) throw DescriptorInvalid("grid half-width must be positive");
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

void GridSpec::point(std::size_t idx, double* out) const {
  for (int a = d - 1; a >= 0; --a) {
    out[a] = x(static_cast<int>(idx % n));
    idx /= n;
  }
}

void GridSpec::frequency(std::size_t idx, double* out) const {
  for (int a = d - 1; a >= 0; --a) {
    out[a] = xi(static_cast<int>(idx % n));
    idx /= n;
  }
}

bool GridSpec::is_nyquist(std::size_t idx) const {
  for (int a = 0; a < d; ++a) {
    if (static_cast<int>(idx % n) == n / 2) return true;
    idx /= n;
  }
  return false;
}

Field::Field(GridSpec g, Space s) : grid(g), values(g.size(), 0.0), space(s) {}

Field Field::from_function(const GridSpec& g, const std::function<cplx(Point)>& f) {
  Field out(g, Space::Physical);
  double p[2];
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    g.point(i, p);
    out.values[i] = f(Point(p, g.d));
  }
  return out;
}

Field fourier_forward(const Field& f) {
  if (f.space != Space::Physical) throw EvaluationError("fourier_forward expects a physical field");
  Field out = f;
  out.space = Space::Frequency;
  run_fft(out.values, f.grid, FFTW_FORWARD);
  const double w = std::pow(f.grid.dx() / (2 * kPi), f.grid.d);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= w * parity(f.grid, i);
  return out;
}

Field fourier_inverse(const Field& g) {
  if (g.space != Space::Frequency) throw EvaluationError("fourier_inverse expects a frequency field");
  Field out = g;
  out.space = Space::Physical;
  const double w = std::pow(g.grid.dxi(), g.grid.d);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= w * parity(g.grid, i);
  run_fft(out.values, g.grid, FFTW_BACKWARD);
  return out;
}

double l2_norm(const Field& f) {
  double s = 0;
  for (const auto& v : f.values) s += std::norm(v);
  if (f.space == Space::Physical) return std::sqrt(std::pow(f.grid.dx(), f.grid.d) * s);
  return std::sqrt(std::pow(2 * kPi * f.grid.dxi(), f.grid.d) * s);
}

double sobolev_norm(const Field& f, double s) {
  const Field hat = f.space == Space::Frequency ? f : fourier_forward(f);
  const auto& g = hat.grid;
  double acc = 0;
  double xi[2];
  for (std::size_t i = 0; i < hat.values.size(); ++i) {
    g.frequency(i, xi);
    double r2 = 0;
    for (int a = 0; a < g.d; ++a) r2 += xi[a] * xi[a];
    acc += std::pow(1 + r2, s) * std::norm(hat.values[i]);
  }
  return std::sqrt(std::pow(2 * kPi * g.dxi(), g.d) * acc);
}

void zero_nyquist(Field& f) {
  if (f.space != Space::Frequency) throw EvaluationError("zero_nyquist expects a frequency field");
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.grid.is_nyquist(i)) f.values[i] = 0;
}

std::vector<cplx> multiplier_on_grid(const Multiplier& m, const GridSpec& g,
                                     const MultiplierOptions& opt) {
  std::vector<cplx> out(g.size());
  double xi[2];
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (g.is_nyquist(i)) {
      out[i] = 0;
      continue;
    }
    g.frequency(i, xi);
    if (i == 0 && opt.origin_value) {
      out[i] = *opt.origin_value;
    } else {
      out[i] = m(Freq(xi, g.d));
    }
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag())) {
      std::ostringstream os;
      os << "multiplier is not finite at frequency (";
      for (int a = 0; a < g.d; ++a) os << (a ? ", " : "") << xi[a];
      os << ")";
      throw EvaluationError(os.str());
    }
  }
  return out;
}

Multiplier symbol_multiplier(const SymbolDescriptor& s, double scale) {
  if (scale == 1.0) return [s](Freq xi) { return eval_symbol(s, xi); };
  return [s, scale](Freq xi) {
    double y[4];
    for (std::size_t i = 0; i < xi.size(); ++i) y[i] = scale * xi[i];
    return eval_symbol(s, Freq(y, xi.size()));
  };
}

Field apply_multiplier_values(const std::vector<cplx>& values, const Field& f) {
  Field hat = f.space == Space::Frequency ? f : fourier_forward(f);
  if (values.size() != hat.values.size()) throw EvaluationError("multiplier size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) hat.values[i] *= values[i];
  return fourier_inverse(hat);
}

Field apply_multiplier(const Multiplier& m, const Field& f, const MultiplierOptions& opt) {
  return apply_multiplier_values(multiplier_on_grid(m, f.grid, opt), f);
}

Field apply_pdo(const HohSymbol& a, const Field& f, const PdoOptions& opt) {
  const GridSpec& g = f.grid;
  const double cost = std::pow(static_cast<double>(g.size()), 2);
  if (cost > std::pow(2.0, 30) && !opt.allow_large)
    throw CostGuardExceeded("apply_pdo would need " + std::to_string(cost) +
                            " symbol evaluations (limit 2^30); pass allow_large to override");
  if (a.dim() != g.d) throw DescriptorInvalid("symbol and grid dimensions differ");
  Field hat = f.space == Space::Frequency ? f : fourier_forward(f);
  zero_nyquist(hat);
  const std::size_t N = g.size();
  const double w = std::pow(g.dxi(), g.d);

  // e^{i x_j ξ_k} = (-1)^k e^{2πi jk/n} per axis.
  std::vector<cplx> roots(g.n);
  for (int j = 0; j < g.n; ++j) roots[j] = std::polar(1.0, 2 * kPi * j / g.n);

  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < N; ++k)
    if (hat.values[k] != 0.0) active.push_back(k);

  Field out(g, Space::Physical);
  parallel_for(N, opt.jobs, [&](std::size_t j) {
    double x[2], xi[2];
    g.point(j, x);
    int jj[2] = {0, 0};
    {
      std::size_t t = j;
      for (int ax = g.d - 1; ax >= 0; --ax) {
        jj[ax] = static_cast<int>(t % g.n);
        t /= g.n;
      }
    }
    cplx acc = 0;
    for (std::size_t k : active) {
      g.frequency(k, xi);
      std::size_t t = k;
      long long phase = 0;
      for (int ax = g.d - 1; ax >= 0; --ax) {
        phase += static_cast<long long>(jj[ax]) * static_cast<long long>(t % g.n);
        t /= g.n;
      }
      cplx e = roots[phase % g.n] * parity(g, k);
      acc += e * a(Point(x, g.d), Freq(xi, g.d)) * hat.values[k];
    }
    out.values[j] = w * acc;
  });
  return out;
}

double operator_norm_bound(const HohSymbol& a, int k, const NormBoundOptions& opt) {
  const int d = a.dim();
  if (2 * k <= d) throw DescriptorInvalid("operator_norm_bound needs k > d/2");
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < opt.n_x; ++i) {
    double x = -opt.x_half_width + 2 * opt.x_half_width * i / std::max(1, opt.n_x - 1);
    xs.push_back(std::vector<double>(d, x));
  }
  std::vector<std::vector<double>> xis;
  xis.push_back(std::vector<double>(d, 0.0));
  for (int i = 0; i < opt.n_radii; ++i) {
    double r = opt.xi_lo * std::pow(opt.xi_hi / opt.xi_lo, static_cast<double>(i) / (opt.n_radii - 1));
    for (int sgn : {-1, 1}) {
      std::vector<double> v(d, 0.0);
      if (d == 1) {
        v[0] = sgn * r;
      } else {
        v[0] = sgn * r * std::cos(0.3);
        v[1] = r * std::sin(0.3);
      }
      xis.push_back(v);
    }
  }
  std::vector<std::pair<MultiIndex, int>> idx;  // multi-index, order
  auto all = [&](int order_max) {
    std::vector<MultiIndex> out;
    if (d == 1) {
      for (int i = 0; i <= order_max; ++i) out.push_back({i});
    } else {
      for (int i = 0; i <= order_max; ++i)
        for (int j = 0; i + j <= order_max; ++j) out.push_back({i, j});
    }
    return out;
  };
  const auto ms = all(k);
  double sup = 0;
  for (const auto& al : ms) {
    int ka = 0;
    for (int v : al) ka += v;
    for (const auto& be : ms) {
      for (const auto& x : xs) {
        for (const auto& xi : xis) {
          double r = 0;
          for (double v : xi) r += v * v;
          r = std::sqrt(r);
          if (ka > 0 && r == 0) continue;
          cplx v = a.derivative(Point(x.data(), d), Freq(xi.data(), d), al, be);
          sup = std::max(sup, std::pow(r, ka) * std::abs(v));
        }
      }
    }
  }
  return sup;
}

double peetre_ratio(double s, double xi, double eta) {
  auto br = [](double v) { return std::sqrt(1 + v * v); };
  return std::pow(br(xi + eta), s) / (std::pow(br(xi), s) * std::pow(br(eta), std::abs(s)));
}

void write_field_csv(const std::string& path, const Field& f, const std::string& comment) {
  std::ofstream os(path);
  if (!os) throw EvaluationError("cannot write '" + path + "'");
  if (!comment.empty()) os << "# " << comment << "\n";
  for (int a = 0; a < f.grid.d; ++a) os << "i" << a << "[index],";
  os << "re[value],im[value]\n";
  os.precision(17);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    std::size_t t = i;
    int ids[2] = {0, 0};
    for (int a = f.grid.d - 1; a >= 0; --a) {
      ids[a] = static_cast<int>(t % f.grid.n);
      t /= f.grid.n;
    }
    for (int a = 0; a < f.grid.d; ++a) os << ids[a] << ",";
    os << f.values[i].real() << "," << f.values[i].imag() << "\n";
  }
}

namespace {
void put_le(std::ofstream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}
double get_le(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw EvaluationError("truncated field file");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}
}  // namespace

void write_field_binary(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw EvaluationError("cannot write '" + path + "'");
  put_le(os, f.grid.d);
  put_le(os, f.grid.n);
  put_le(os, f.grid.L);
  for (const auto& v : f.values) {
    put_le(os, v.real());
    put_le(os, v.imag());
  }
}

Field read_field_binary(const std::string& path, Space space) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw EvaluationError("cannot read '" + path + "'");
  int d = static_cast<int>(get_le(is));
  int n = static_cast<int>(get_le(is));
  double L = get_le(is);
  Field f(GridSpec(d, n, L), space);
  for (auto& v : f.values) {
    double re = get_le(is);
    double im = get_le(is);
    v = {re, im};
  }
  return f;
}

}  // namespace levysg
