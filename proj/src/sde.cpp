#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levysg/parallel.hpp"
#include "levysg/semigroup.hpp"

namespace levysg {

// ------------------------------------------------------------------ Philox

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

constexpr double kPi = std::numbers::pi;
constexpr double kExplode = 1e12;
constexpr long kBlock = 1024;  // paths per accumulation block, independent of jobs

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::generate(std::array<std::uint64_t, 4> c,
                                                  std::array<std::uint64_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double Philox4x64::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform_open(), u2 = uniform();
  double r = std::sqrt(-2 * std::log(u1));
  spare_ = r * std::sin(2 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2 * kPi * u2);
}

double Philox4x64::exponential() { return -std::log(uniform_open()); }

// --------------------------------------------------------------- samplers

namespace {

// Symmetric α-stable with E e^{iξX} = e^{-|ξ|^α} (Chambers–Mallows–Stuck).
double cms_symmetric(double alpha, Philox4x64& rng) {
  double U = kPi * (rng.uniform_open() - 0.5);
  double W = rng.exponential();
  if (std::abs(alpha - 1) < 1e-12) return std::tan(U);
  return std::sin(alpha * U) / std::pow(std::cos(U), 1 / alpha) *
         std::pow(std::cos((1 - alpha) * U) / W, (1 - alpha) / alpha);
}

// Positive a-stable, 0 < a < 1, with E e^{-λS} = e^{-λ^a} (Kanter).
double kanter_positive(double a, Philox4x64& rng) {
  double U = kPi * rng.uniform_open();
  double E = rng.exponential();
  double A = std::pow(std::pow(std::sin(a * U), a) * std::pow(std::sin((1 - a) * U), 1 - a) / std::sin(U),
                      1 / (1 - a));
  return std::pow(A / E, (1 - a) / a);
}

// Inverse Gaussian with mean mu and shape lam (Michael–Schucany–Haas),
// written without the cancellation of the textbook form.
double inverse_gaussian(double mu, double lam, Philox4x64& rng) {
  double n = rng.normal();
  double y = n * n;
  double x = mu - 2 * mu * mu * y / (std::sqrt(4 * mu * lam * y + mu * mu * y * y) + mu * y);
  if (rng.uniform() <= mu / (mu + x)) return x;
  return mu * mu / x;
}

}  // namespace

void sample_increment(const SymbolDescriptor& driver, double h, Philox4x64& rng, double* out) {
  if (!(h > 0)) throw DescriptorInvalid("increment step must be positive");
  const int d = driver.dim();
  switch (driver.kind()) {
    case SymbolKind::Brownian: {
      const double s = std::sqrt(2 * h);
      for (int i = 0; i < d; ++i) out[i] = s * rng.normal();
      return;
    }
    case SymbolKind::AlphaStable: {
      const double a = driver.alpha();
      const double scale = std::pow(h, 1 / a);
      if (d == 1) {
        out[0] = scale * cms_symmetric(a, rng);
        return;
      }
      // Sub-Gaussian: sqrt(S) G with S positive (α/2)-stable, G ~ N(0, 2I).
      double s = std::sqrt(kanter_positive(a / 2, rng));
      for (int i = 0; i < d; ++i) out[i] = scale * s * std::sqrt(2.0) * rng.normal();
      return;
    }
    case SymbolKind::NIG: {
      const double gamma = std::sqrt(driver.a() * driver.a() - driver.b() * driver.b());
      const double hd = h * driver.delta();
      double Z = inverse_gaussian(hd / gamma, hd * hd, rng);
      out[0] = h * driver.m() + driver.b() * Z + std::sqrt(Z) * rng.normal();
      return;
    }
    default:
      throw DescriptorInvalid(std::string("no exact sampler for driver '") + driver.name() +
                              "'; supported: brownian, alpha_stable, nig");
  }
}

double sample_increment(const SymbolDescriptor& driver, double h, Philox4x64& rng) {
  if (driver.dim() != 1) throw DescriptorInvalid("scalar sampler needs a one-dimensional driver");
  double v;
  sample_increment(driver, h, rng, &v);
  return v;
}

void SdeSpec::validate() const {
  auto k = driver.kind();
  if (k != SymbolKind::Brownian && k != SymbolKind::AlphaStable && k != SymbolKind::NIG)
    throw ConfigError("sde.driver", "driver must be brownian, alpha_stable or nig");
  if (driver.dim() != coeff.dim) throw ConfigError("sde.coeff", "coefficient dimension differs from driver");
  if (!(h > 0)) throw ConfigError("sde.h", "step must be positive");
  if (paths < 1000) throw ConfigError("sde.paths", "at least 1000 paths are required");
}

// ------------------------------------------------------------------ MC engine

namespace {

struct Acc {
  std::vector<cplx> sum;
  std::vector<double> sumsq;
  std::vector<long> count, excluded;
  explicit Acc(std::size_t n) : sum(n, 0.0), sumsq(n, 0.0), count(n, 0), excluded(n, 0) {}
};

// Pairwise combination of block accumulators in block order.
Acc combine(std::vector<Acc>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  Acc a = combine(blocks, lo, mid), b = combine(blocks, mid, hi);
  for (std::size_t i = 0; i < a.sum.size(); ++i) {
    a.sum[i] += b.sum[i];
    a.sumsq[i] += b.sumsq[i];
    a.count[i] += b.count[i];
    a.excluded[i] += b.excluded[i];
  }
  return a;
}

long step_count(double t, double h) {
  double r = t / h;
  long n = std::lround(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r))
    throw ConfigError("t", "horizon must be an integer multiple of the step h");
  return n;
}

}  // namespace

std::vector<McResult> mc_semigroup_multi(const SdeSpec& sde, const std::vector<TestFunction>& fs, double t,
                                         const std::vector<std::vector<double>>& xs) {
  sde.validate();
  if (!(t >= 0)) throw ConfigError("t", "horizon must be nonnegative");
  const int d = sde.driver.dim();
  const std::size_t nx = xs.size(), nf = fs.size();
  std::vector<McResult> out(nf);
  if (t == 0) {
    for (std::size_t f = 0; f < nf; ++f) {
      out[f].std_error.assign(nx, 0.0);
      out[f].n_excluded.assign(nx, 0);
      for (const auto& x : xs) out[f].mean.push_back(fs[f](Point(x.data(), d)));
    }
    return out;
  }
  const long steps = step_count(t, sde.h);
  const std::size_t nblocks = static_cast<std::size_t>((sde.paths + kBlock - 1) / kBlock);
  std::vector<Acc> blocks;
  blocks.reserve(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) blocks.emplace_back(nx * nf);

  parallel_for(nblocks, sde.jobs, [&](std::size_t b) {
    Acc& acc = blocks[b];
    std::vector<double> incr(static_cast<std::size_t>(steps) * d);
    std::vector<double> X(d);
    const long p0 = static_cast<long>(b) * kBlock;
    const long p1 = std::min(sde.paths, p0 + kBlock);
    for (long p = p0; p < p1; ++p) {
      Philox4x64 rng(sde.seed, static_cast<std::uint64_t>(p));
      for (long s = 0; s < steps; ++s) sample_increment(sde.driver, sde.h, rng, &incr[s * d]);
      for (std::size_t ix = 0; ix < nx; ++ix) {
        for (int i = 0; i < d; ++i) X[i] = xs[ix][i];
        bool exploded = false;
        for (long s = 0; s < steps && !exploded; ++s) {
          for (int i = 0; i < d; ++i) {
            X[i] += sde.coeff.sigma[i](X[i]) * incr[s * d + i];
            if (!(std::abs(X[i]) <= kExplode)) exploded = true;
          }
        }
        for (std::size_t f = 0; f < nf; ++f) {
          const std::size_t k = f * nx + ix;
          if (exploded) {
            ++acc.excluded[k];
            continue;
          }
          cplx v = fs[f](Point(X.data(), d));
          acc.sum[k] += v;
          acc.sumsq[k] += std::norm(v);
          ++acc.count[k];
        }
      }
    }
  });

  Acc tot = combine(blocks, 0, nblocks);
  for (std::size_t f = 0; f < nf; ++f) {
    auto& r = out[f];
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = f * nx + ix;
      const double n = static_cast<double>(tot.count[k]);
      cplx mean = n > 0 ? tot.sum[k] / n : cplx{std::nan(""), std::nan("")};
      double var = n > 1 ? std::max(0.0, (tot.sumsq[k] - n * std::norm(mean)) / (n - 1)) : 0.0;
      r.mean.push_back(mean);
      r.std_error.push_back(n > 0 ? std::sqrt(var / n) : std::nan(""));
      r.n_excluded.push_back(tot.excluded[k]);
    }
  }
  return out;
}

McResult mc_semigroup(const SdeSpec& sde, const TestFunction& f, double t,
                      const std::vector<std::vector<double>>& xs) {
  return mc_semigroup_multi(sde, {f}, t, xs).front();
}

std::vector<SymbolEstimate> mc_symbol_extraction(const SdeSpec& sde, const std::vector<double>& x,
                                                 const std::vector<std::vector<double>>& xis, double t) {
  if (!(t > 0 && t <= 0.01)) throw ConfigError("t_small", "symbol extraction requires 0 < t <= 0.01");
  if (sde.paths < 100000) throw ConfigError("sde.paths", "symbol extraction requires at least 1e5 paths");
  const int d = sde.driver.dim();
  if (static_cast<int>(x.size()) != d) throw ConfigError("x", "point dimension differs from driver");
  std::vector<TestFunction> fs;
  for (const auto& xi : xis) {
    if (static_cast<int>(xi.size()) != d) throw ConfigError("xi", "frequency dimension differs from driver");
    fs.push_back([xi, x, d](Point X) {
      double ph = 0;
      for (int i = 0; i < d; ++i) ph += (X[i] - x[i]) * xi[i];
      return std::polar(1.0, ph);
    });
  }
  auto res = mc_semigroup_multi(sde, fs, t, {x});
  std::vector<SymbolEstimate> out;
  for (std::size_t j = 0; j < xis.size(); ++j) {
    SymbolEstimate e;
    e.xi = xis[j];
    bool zero = std::all_of(xis[j].begin(), xis[j].end(), [](double v) { return v == 0; });
    e.estimate = zero ? cplx{0, 0} : -(res[j].mean[0] - 1.0) / t;
    e.std_error = zero ? 0.0 : res[j].std_error[0] / t;
    std::vector<double> y(d);
    for (int i = 0; i < d; ++i) y[i] = sde.coeff.sigma[i](x[i]) * xis[j][i];
    e.target = eval_symbol(sde.driver, Freq(y.data(), d));
    e.bias_bound = t * std::norm(e.target) / 2;
    e.band = e.bias_bound + 3 * e.std_error;
    e.deviation = std::abs(e.estimate - e.target);
    e.inside = e.deviation <= e.band;
    out.push_back(e);
  }
  return out;
}

}  // namespace levysg
