#include "levysg/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "levysg/classify.hpp"
#include "levysg/experiments.hpp"
#include "levysg/fit.hpp"
#include "levysg/semigroup.hpp"

namespace levysg::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSchemaVersion = "1";

struct Csv {
  std::string name;
  std::vector<std::string> header;  // "column[unit]"
  std::vector<std::vector<std::string>> rows;
};

// What an experiment hands back to the runner.
struct Outcome {
  json result = json::object();
  std::vector<Csv> tables;
  std::vector<std::string> warnings;
  bool hypothesis_warning = false;  // exit 2
  bool refused = false;             // exit 1, report still written
};

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json complex_json(cplx z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

json index_json(const IndexReport& r) {
  json per = json::array();
  for (const auto& a : r.per_alpha)
    per.push_back({{"alpha", a.alpha},
                   {"exponent", num(a.exponent)},
                   {"exponent_plus", num(a.exponent_plus)},
                   {"exponent_minus", num(a.exponent_minus)},
                   {"residual", num(a.residual)},
                   {"direction_spread", num(a.direction_spread)},
                   {"unreliable", a.unreliable}});
  return {{"order", r.order},       {"s", num(r.s)},
          {"s_plus", num(r.s_plus)}, {"s_minus", num(r.s_minus)},
          {"window", {r.window_lo, r.window_hi}}, {"unreliable", r.unreliable},
          {"per_alpha", per}};
}

json sector_json(const SectorReport& s) {
  return {{"sectorial", s.sectorial}, {"kappa", num(s.kappa)},
          {"theta", num(s.theta)},    {"resolvent_angle", num(s.resolvent_angle)},
          {"omega", s.omega},         {"sample", s.grid}};
}

json grid_json(const GridSpec& g) { return {{"d", g.d}, {"n", g.n}, {"L", g.L}}; }

Csv index_table(const IndexReport& r) {
  Csv c{"indices.csv", {"alpha[multi-index]", "exponent[1]", "exponent_plus[1]", "exponent_minus[1]", "residual[log]"}, {}};
  for (const auto& a : r.per_alpha) {
    std::string al;
    for (std::size_t i = 0; i < a.alpha.size(); ++i) al += (i ? ":" : "") + std::to_string(a.alpha[i]);
    c.rows.push_back({al, cell(a.exponent), cell(a.exponent_plus), cell(a.exponent_minus), cell(a.residual)});
  }
  return c;
}

std::vector<double> time_grid(const Section& e) {
  if (e.has("t_values")) return e.numbers("t_values", {});
  double lo = e.number("t_min", 1e-3), hi = e.number("t_max", 1.0);
  int n = e.integer("n_t", 16);
  if (!(lo > 0 && hi > lo && n >= 2)) throw ConfigError(e.full("t_min"), "need 0 < t_min < t_max and n_t >= 2");
  return logspace(lo, hi, n);
}

ContourSpec contour_from(const Section& c) {
  ContourSpec s;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.theta_prime = c.has("theta_prime") ? c.number("theta_prime") : nan;
  s.rho = c.has("rho") ? c.number("rho") : nan;
  s.r_max = c.has("r_max") ? c.number("r_max") : nan;
  s.n_ray = c.integer("n_ray", s.n_ray);
  s.n_arc = c.integer("n_arc", s.n_arc);
  s.certify = c.boolean("certify", true);
  if (s.n_ray < 8 || s.n_arc < 8) throw ConfigError(c.full("n_ray"), "node counts must be at least 8");
  if (c.has("rho") && !(s.rho > 0)) throw ConfigError(c.full("rho"), "arc radius must be positive");
  return s;
}

std::vector<std::vector<double>> x_points(const Section& e, int d, std::vector<std::vector<double>> fallback) {
  if (e.has("x")) {
    auto xs = e.points("x", {});
    for (const auto& x : xs)
      if (static_cast<int>(x.size()) != d) throw ConfigError(e.full("x"), "point dimension differs from the driver");
    return xs;
  }
  if (e.has("x_min") || e.has("x_max") || e.has("n_x")) {
    double lo = e.number("x_min", -2), hi = e.number("x_max", 2);
    int n = e.integer("n_x", 9);
    if (d != 1 || n < 1 || hi < lo) throw ConfigError(e.full("x_min"), "x range needs d = 1, n_x >= 1, x_min <= x_max");
    std::vector<std::vector<double>> xs;
    for (int i = 0; i < n; ++i) xs.push_back({n == 1 ? lo : lo + (hi - lo) * i / (n - 1)});
    return xs;
  }
  return e.points("x", fallback);
}

SdeSpec sde_from(const RunConfig& rc, const SymbolDescriptor& driver, double default_h, long default_paths) {
  Section s = rc.section("sde");
  SdeSpec sde;
  sde.driver = driver;
  sde.coeff = coefficients_from(rc.section("coefficients"), driver.dim());
  sde.h = s.number("h", default_h);
  sde.paths = static_cast<long>(s.large_integer("paths", default_paths));
  sde.seed = rc.seed;
  sde.jobs = rc.jobs;
  try {
    sde.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("sde", e.what());
  }
  return sde;
}

// ---------------------------------------------------------------- experiments

using Compute = std::function<Outcome()>;

Compute plan_classify(const RunConfig& rc) {
  Section e = rc.section("experiment");
  auto psi = rc.top().symbol("psi");
  IndexOptions io;
  int order = e.integer("order", 1);
  io.window_lo = e.number("window_lo", io.window_lo);
  io.window_hi = e.number("window_hi", io.window_hi);
  io.n_points = e.integer("n_points", io.n_points);
  if (order < 0 || order > 4) throw ConfigError(e.full("order"), "order must be in 0..4");
  if (!(io.window_lo >= 1 && io.window_hi > io.window_lo)) throw ConfigError(e.full("window_lo"), "need 1 <= lo < hi");
  double sec_lo = e.number("sector_lo", 1e3), sec_hi = e.number("sector_hi", 1e6);
  int sec_n = e.integer("sector_points", 61);
  double omega = e.number("omega", 0.0);
  if (!(sec_lo > 0 && sec_hi > sec_lo && sec_n >= 2)) throw ConfigError(e.full("sector_lo"), "need 0 < lo < hi");
  const int d = psi.dim();
  std::vector<std::vector<double>> def;
  for (int i = 0; i < 16; ++i) {
    double v = -4 + 8.0 * i / 15;
    if (d == 1)
      def.push_back({v});
    else
      def.push_back({v, 3 * std::sin(1.7 * i)});
  }
  auto pts = e.points("negdef_points", def);
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != d) throw ConfigError(e.full("negdef_points"), "point dimension differs");
  if (pts.size() < 2 || pts.size() > 64) throw ConfigError(e.full("negdef_points"), "need 2..64 points");
  std::optional<double> gamma;
  if (e.has("small_xi_gamma")) gamma = e.number("small_xi_gamma");
  std::optional<CoefficientField> coeff;
  if (rc.root.table("coefficients")) coeff = coefficients_from(rc.section("coefficients"), d);

  return [=]() {
    Outcome o;
    auto idx = estimate_bg_index(psi, order, io);
    auto sec = sector_kappa(psi, FrequencySample::log_radial(d, sec_lo, sec_hi, sec_n), omega);
    auto nd = check_negative_definite(psi, pts);
    o.result = {{"symbol", psi.name()},
                {"indices", index_json(idx)},
                {"sector", sector_json(sec)},
                {"negative_definite", nd.negative_definite},
                {"min_eigenvalue", num(nd.min_eigenvalue)}};
    if (gamma) {
      auto sx = check_small_xi_growth(psi, *gamma, order);
      o.result["small_xi"] = {{"gamma", *gamma}, {"sup", num(sx.sup)}, {"bounded", sx.bounded},
                              {"ceiling", sx.ceiling}, {"note", sx.note}};
      if (!sx.bounded) o.warnings.push_back("small-xi growth bound fails for gamma = " + cell(*gamma));
    }
    if (coeff) {
      auto h1 = check_hypothesis1(*coeff, 2, default_x_sample(d));
      o.result["hypothesis1"] = {{"pass", h1.pass},       {"c_lo", num(h1.c_lo)},
                                 {"c_hi", num(h1.c_hi)},   {"c_lo_vanishes", h1.c_lo_vanishes},
                                 {"c_hi_unbounded", h1.c_hi_unbounded},
                                 {"sigma_derivative_sup", nums(h1.sigma_derivative_sup)},
                                 {"b_derivative_sup", nums(h1.b_derivative_sup)},
                                 {"messages", h1.messages}};
      if (!h1.pass) {
        o.hypothesis_warning = true;
        for (const auto& m : h1.messages) o.warnings.push_back("coefficients: " + m);
      }
    }
    if (!nd.negative_definite) {
      o.hypothesis_warning = true;
      o.warnings.push_back("symbol is not negative definite (min eigenvalue " + cell(nd.min_eigenvalue) + ")");
    }
    if (!sec.sectorial) {
      o.hypothesis_warning = true;
      o.warnings.push_back("symbol is not sectorial on " + sec.grid);
    }
    if (idx.unreliable) o.warnings.push_back("index fit residual above 0.1 for some multi-index");
    o.tables.push_back(index_table(idx));
    return o;
  };
}

Compute plan_smoothing(const RunConfig& rc) {
  Section e = rc.section("experiment");
  SmoothingSpec sp;
  sp.psi = rc.top().symbol("psi");
  sp.q = rc.top().symbol("q");
  sp.grid = grid_from(rc.section("grid"), sp.psi.dim());
  sp.coeff = coefficients_from(rc.section("coefficients"), sp.grid.d);
  sp.rho = e.number("rho", 0.0);
  sp.engine = engine_from_name(e.string("engine", "multiplier"));
  sp.borderline = e.boolean("borderline", false);
  sp.t_values = time_grid(e);
  sp.contour = contour_from(rc.section("contour"));
  Section mc = rc.section("mc");
  sp.mc.paths = static_cast<long>(mc.large_integer("paths", sp.mc.paths));
  sp.mc.h_fraction = mc.number("h_fraction", sp.mc.h_fraction);
  sp.mc.seed = rc.seed;
  if (sp.mc.paths < 1000) throw ConfigError(mc.full("paths"), "at least 1000 paths are required");
  double inv = 1 / sp.mc.h_fraction;
  if (!(sp.mc.h_fraction > 0 && sp.mc.h_fraction <= 1) || std::abs(inv - std::round(inv)) > 1e-9)
    throw ConfigError(mc.full("h_fraction"), "h_fraction must be 1/m for an integer m >= 1");
  Section pk = rc.section("packets");
  sp.packets.center = pk.number("center", sp.packets.center);
  sp.packets.width = pk.number("width", sp.packets.width);
  sp.packets.carrier_lo = pk.number("carrier_lo", sp.packets.carrier_lo);
  sp.packets.carrier_hi = pk.number("carrier_hi", sp.packets.carrier_hi);
  sp.packets.n_carriers = pk.integer("n_carriers", sp.packets.n_carriers);
  sp.jobs = rc.jobs;

  return [sp]() {
    Outcome o;
    SmoothingResult r;
    try {
      r = smoothing_rate(sp);
    } catch (const HypothesisViolation& hv) {
      // Refusal: report the classification that triggered it.
      o.refused = true;
      o.warnings.push_back(hv.what());
      FrequencySample fsm = FrequencySample::log_radial(sp.grid.d, sp.grid.dxi(), sp.grid.xi_max(), 61);
      o.result = {{"refusal", hv.what()},
                  {"sector", sector_json(sector_kappa(sp.psi, fsm))},
                  {"psi_index", index_json(estimate_bg_index(sp.psi, 1))}};
      return o;
    }
    o.result = {{"rho", r.rho},
                {"engine", r.engine},
                {"grid", grid_json(sp.grid)},
                {"t_values", nums(r.t_values)},
                {"norms", nums(r.norms)},
                {"ratio", nums(r.ratio)},
                {"field_ratio", nums(r.field_ratio)},
                {"constants", nums(r.constants)},
                {"local_slope", nums(r.local_slope)},
                {"u_norm", num(r.u_norm)},
                {"gamma_fit", num(r.gamma_fit)},
                {"gamma_predicted", num(r.gamma_predicted)},
                {"fit_residual", num(r.fit_residual)},
                {"fit_flagged", r.fit_flagged},
                {"s1", num(r.s1)},
                {"s2", num(r.s2)},
                {"psi_index", index_json(r.psi_index)},
                {"q_index", index_json(r.q_index)},
                {"sector", sector_json(r.sector)},
                {"xi_max", num(r.xi_max)},
                {"r_star_max", num(r.r_star_max)},
                {"window_ok", r.window_ok},
                {"contour_residual", num(r.contour_residual)},
                {"mc_excluded", r.mc_excluded},
                {"borderline", sp.borderline}};
    o.warnings = r.warnings;
    o.hypothesis_warning = r.hypothesis_warning;
    Csv c{"norms.csv", {"t[time]", "norm[H^rho]", "ratio[1]", "local_slope[1]"}, {}};
    for (std::size_t i = 0; i < r.t_values.size(); ++i)
      c.rows.push_back({cell(r.t_values[i]), cell(r.norms[i]), cell(r.ratio[i]), cell(r.local_slope[i])});
    o.tables.push_back(std::move(c));
    return o;
  };
}

Compute plan_resolvent(const RunConfig& rc) {
  Section e = rc.section("experiment");
  ResolventSpec sp;
  sp.psi = rc.top().symbol("psi");
  sp.q = rc.top().symbol("q");
  sp.grid = grid_from(rc.section("grid"), sp.psi.dim());
  sp.rho = e.number("rho", 0.0);
  std::string ray = e.string("ray", "real");
  if (ray != "real" && ray != "interior" && ray != "angle")
    throw ConfigError(e.full("ray"), "ray must be real, interior or angle");
  double angle = ray == "angle" ? e.number("ray_angle") : 0.0;
  if (e.has("lambda_lo")) sp.lambda_lo = e.number("lambda_lo");
  if (e.has("lambda_hi")) sp.lambda_hi = e.number("lambda_hi");
  sp.n_points = e.integer("n_points", sp.n_points);
  sp.jobs = rc.jobs;

  return [sp, ray, angle]() mutable {
    Outcome o;
    if (ray == "interior") {
      auto fsm = FrequencySample::log_radial(sp.grid.d, sp.grid.dxi(), sp.grid.xi_max(), 61);
      auto sec = sector_kappa(sp.psi, fsm);
      if (!sec.sectorial) throw HypothesisViolation("psi is not sectorial; no interior ray exists");
      sp.ray_angle = interior_ray_angle(sec);
    } else {
      sp.ray_angle = angle;
    }
    auto r = resolvent_decay(sp);
    json lam = json::array();
    for (auto z : r.lambda_values) lam.push_back(complex_json(z));
    o.result = {{"rho", r.rho},
                {"grid", grid_json(sp.grid)},
                {"ray_angle", r.ray_angle},
                {"lambda_values", lam},
                {"abs_lambda", nums(r.abs_lambda)},
                {"norms", nums(r.norms)},
                {"ratio", nums(r.ratio)},
                {"field_ratio", nums(r.field_ratio)},
                {"slope_fit", num(r.slope_fit)},
                {"slope_predicted", num(r.slope_predicted)},
                {"fit_residual", num(r.fit_residual)},
                {"fit_flagged", r.fit_flagged},
                {"s1", num(r.s1)},
                {"s2", num(r.s2)},
                {"sector", sector_json(r.sector)}};
    o.warnings = r.warnings;
    Csv c{"resolvent.csv", {"abs_lambda[1/time]", "re_lambda[1/time]", "im_lambda[1/time]", "norm[H^rho]", "ratio[time]"}, {}};
    for (std::size_t i = 0; i < r.abs_lambda.size(); ++i)
      c.rows.push_back({cell(r.abs_lambda[i]), cell(r.lambda_values[i].real()), cell(r.lambda_values[i].imag()),
                        cell(r.norms[i]), cell(r.ratio[i])});
    o.tables.push_back(std::move(c));
    return o;
  };
}

Compute plan_sde(const RunConfig& rc) {
  Section e = rc.section("experiment");
  auto driver = rc.top().symbol("psi");
  SdeSpec sde = sde_from(rc, driver, 0.01, 10000);
  double t = e.number("t", 0.1);
  if (!(t >= 0)) throw ConfigError(e.full("t"), "t must be nonnegative");
  double r = t / sde.h;
  if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r))
    throw ConfigError(e.full("t"), "t must be an integer multiple of sde.h");
  std::string f = e.string("f", "exp");
  const int d = driver.dim();
  std::vector<double> xi0 = e.numbers("f_xi", std::vector<double>(d, 1.0));
  if (static_cast<int>(xi0.size()) != d) throw ConfigError(e.full("f_xi"), "frequency dimension differs");
  if (f != "exp" && f != "square") throw ConfigError(e.full("f"), "f must be exp or square");
  std::vector<std::vector<double>> def;
  for (int i = 0; i < 9; ++i) def.push_back(std::vector<double>(d, -2 + 0.5 * i));
  auto xs = x_points(e, d, def);

  return [=]() {
    Outcome o;
    TestFunction fn;
    if (f == "exp") {
      fn = [xi0](Point X) {
        double ph = 0;
        for (std::size_t i = 0; i < X.size(); ++i) ph += X[i] * xi0[i];
        return std::polar(1.0, ph);
      };
    } else {
      fn = [](Point X) {
        double s = 0;
        for (double v : X) s += v * v;
        return cplx{s, 0};
      };
    }
    auto res = mc_semigroup(sde, fn, t, xs);
    json mean = json::array();
    long excluded = 0;
    for (auto z : res.mean) mean.push_back(complex_json(z));
    for (long v : res.n_excluded) excluded += v;
    json xj = json::array();
    for (const auto& x : xs) xj.push_back(x);
    o.result = {{"driver", driver.name()}, {"t", t},           {"h", sde.h},
                {"paths", sde.paths},      {"f", f},           {"f_xi", xi0},
                {"x", xj},                 {"mean", mean},     {"std_error", nums(res.std_error)},
                {"n_excluded", res.n_excluded}, {"n_excluded_total", excluded}};
    if (excluded > 0) o.warnings.push_back(std::to_string(excluded) + " exploded paths were excluded");
    Csv c{"mc.csv", {"x[space]", "re_mean[value]", "im_mean[value]", "stderr[value]", "n_excluded[count]"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i)
      c.rows.push_back({cell(xs[i][0]), cell(res.mean[i].real()), cell(res.mean[i].imag()), cell(res.std_error[i]),
                        std::to_string(res.n_excluded[i])});
    o.tables.push_back(std::move(c));
    return o;
  };
}

Compute plan_generator(const RunConfig& rc) {
  Section e = rc.section("experiment");
  auto driver = rc.top().symbol("psi");
  double t = e.number("t", 0.01);
  SdeSpec sde = sde_from(rc, driver, t, 100000);
  const int d = driver.dim();
  std::vector<std::vector<double>> xdef, xidef;
  for (double v : {-1.0, 0.0, 0.5, 1.0}) xdef.push_back(std::vector<double>(d, v));
  for (double v : {0.5, 1.0, 1.5, 2.0}) xidef.push_back(std::vector<double>(d, v));
  auto xs = x_points(e, d, xdef);
  auto xis = e.points("xi", xidef);
  for (const auto& xi : xis)
    if (static_cast<int>(xi.size()) != d) throw ConfigError(e.full("xi"), "frequency dimension differs");
  if (!(t > 0 && t <= 0.01)) throw ConfigError(e.full("t"), "symbol extraction requires 0 < t <= 0.01");
  if (sde.paths < 100000) throw ConfigError("sde.paths", "symbol extraction requires at least 1e5 paths");

  return [=]() {
    Outcome o;
    auto rep = generator_consistency(sde, xs, xis, t);
    json pts = json::array();
    Csv c{"generator.csv",
          {"x[space]", "xi[1/space]", "re_estimate[value]", "im_estimate[value]", "stderr[value]", "re_target[value]",
           "im_target[value]", "band[value]", "deviation[value]", "inside[bool]"},
          {}};
    for (const auto& p : rep.points) {
      const auto& s = p.estimate;
      pts.push_back({{"x", p.x},
                     {"xi", s.xi},
                     {"estimate", complex_json(s.estimate)},
                     {"std_error", num(s.std_error)},
                     {"target", complex_json(s.target)},
                     {"bias_bound", num(s.bias_bound)},
                     {"band", num(s.band)},
                     {"deviation", num(s.deviation)},
                     {"inside", s.inside}});
      c.rows.push_back({cell(p.x[0]), cell(s.xi[0]), cell(s.estimate.real()), cell(s.estimate.imag()),
                        cell(s.std_error), cell(s.target.real()), cell(s.target.imag()), cell(s.band),
                        cell(s.deviation), s.inside ? "1" : "0"});
    }
    o.result = {{"t", t},
                {"h", sde.h},
                {"paths", sde.paths},
                {"points", pts},
                {"max_deviation", num(rep.max_deviation)},
                {"max_band_fraction", num(rep.max_band_fraction)},
                {"pass", rep.pass}};
    if (!rep.pass) {
      o.hypothesis_warning = true;
      o.warnings.push_back("some estimates fall outside the bias + 3 sigma band");
    }
    o.tables.push_back(std::move(c));
    return o;
  };
}

Compute plan_maximizer(const RunConfig& rc) {
  Section e = rc.section("experiment");
  auto triples = e.points("triples", {{2, 1, 4}, {1.5, 0.5, 1}, {1.5, 0.5, 8}});
  for (const auto& tr : triples) {
    if (tr.size() != 3) throw ConfigError(e.full("triples"), "each entry is [s1, s2, lambda]");
    if (!(tr[1] > 0 && tr[1] < tr[0] && tr[2] > 0))
      throw ConfigError(e.full("triples"), "need 0 < s2 < s1 and lambda > 0");
  }
  return [=]() {
    Outcome o;
    json rows = json::array();
    Csv c{"maximizer.csv", {"s1[1]", "s2[1]", "lambda[1/time]", "analytic[1/space]", "numeric[1/space]", "rel_error[1]"}, {}};
    double worst = 0;
    for (const auto& tr : triples) {
      auto m = maximizer_check(tr[0], tr[1], tr[2]);
      worst = std::max(worst, m.rel_error);
      rows.push_back({{"s1", m.s1}, {"s2", m.s2}, {"lambda", m.lambda}, {"analytic", num(m.analytic)},
                      {"numeric", num(m.numeric)}, {"rel_error", num(m.rel_error)}});
      c.rows.push_back({cell(m.s1), cell(m.s2), cell(m.lambda), cell(m.analytic), cell(m.numeric), cell(m.rel_error)});
    }
    o.result = {{"triples", rows}, {"max_rel_error", num(worst)}};
    o.tables.push_back(std::move(c));
    return o;
  };
}

Compute plan(const RunConfig& rc) {
  if (rc.kind == "classify") return plan_classify(rc);
  if (rc.kind == "smoothing") return plan_smoothing(rc);
  if (rc.kind == "resolvent") return plan_resolvent(rc);
  if (rc.kind == "sde") return plan_sde(rc);
  if (rc.kind == "generator-check") return plan_generator(rc);
  if (rc.kind == "maximizer") return plan_maximizer(rc);
  throw ConfigError("experiment.kind", "unknown experiment '" + rc.kind + "'");
}

// ------------------------------------------------------------------ artifacts

std::string utc_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_csv(const fs::path& dir, const Csv& c, const std::string& hash) {
  std::ofstream f(dir / c.name);
  f << "# config_hash=" << hash << "\n";
  for (std::size_t i = 0; i < c.header.size(); ++i) f << (i ? "," : "") << c.header[i];
  f << "\n";
  for (const auto& r : c.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << r[i];
    f << "\n";
  }
}

void write_log(const fs::path& dir, const RunConfig& rc, const std::string& config_path,
               const std::vector<std::string>& warnings, const std::string& error, int code) {
  std::ofstream f(dir / "run.log");
  f << "run " << utc_now() << "\n";
  f << "config " << config_path << "\n";
  f << "config_hash " << rc.hash << "\n";
  f << "experiment " << rc.kind << "\n";
  f << "seed " << rc.seed << "\n";
  f << "jobs " << rc.jobs << "\n";
  f << "resolved parameters:\n";
  for (const auto& [k, v] : rc.log->values)
    f << "  " << k << " = " << v << (rc.log->defaulted.count(k) ? "  (default)" : "") << "\n";
  for (const auto& w : warnings) f << "warning: " << w << "\n";
  if (!error.empty()) f << "error: " << error << "\n";
  f << "exit " << code << "\n";
}

json resolved_json(const RunConfig& rc) {
  json j = json::object();
  for (const auto& [k, v] : rc.log->values) j[k] = {{"value", v}, {"default", rc.log->defaulted.count(k) > 0}};
  return j;
}

}  // namespace

std::string list_catalog() {
  std::ostringstream os;
  os << "symbols:\n";
  for (const auto& s : symbol_catalog()) os << "  " << s << "\n";
  os << "coefficient fields:\n";
  for (const auto& s : coefficient_catalog()) os << "  " << s << "\n";
  os << "experiments:\n";
  for (const auto& s : experiment_catalog()) os << "  " << s << "\n";
  return os.str();
}

int run(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.subcommand == "list-catalog") {
    out << list_catalog();
    return kExitOk;
  }
  if (kind_for_subcommand(opt.subcommand).empty()) {
    err << "error: unknown subcommand '" << opt.subcommand << "'\n";
    return kExitError;
  }

  RunConfig rc;
  Compute compute;
  try {
    rc = load_run_config(opt);
    compute = plan(rc);
    rc.reject_unknown_keys();
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitError;
  }

  const fs::path dir(rc.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << rc.out_dir << "': " << ec.message() << "\n";
    return kExitError;
  }

  Outcome o;
  std::string error;
  try {
    o = compute();
  } catch (const std::exception& e) {
    error = rc.kind + ": " + e.what();
  }
  if (!error.empty()) {
    write_log(dir, rc, opt.config_path, {}, error, kExitError);
    err << "error: " << error << "\n";
    return kExitError;
  }

  int code = o.refused ? kExitError : (o.hypothesis_warning ? kExitWarnings : kExitOk);
  const char* status = o.refused ? "refused" : (o.hypothesis_warning ? "warning" : "ok");
  json doc = {{"schema_version", kSchemaVersion},
              {"config_hash", rc.hash},
              {"experiment", rc.kind},
              {"seed", rc.seed},
              {"status", status},
              {"timestamp", utc_now()},
              {"warnings", o.warnings},
              {"resolved", resolved_json(rc)},
              {"result", o.result}};
  {
    std::ofstream f(dir / "result.json");
    f << doc.dump(2) << "\n";
  }
  if (rc.write_csv)
    for (const auto& c : o.tables) write_csv(dir, c, rc.hash);
  write_log(dir, rc, opt.config_path, o.warnings, o.refused ? "refused" : "", code);

  for (const auto& w : o.warnings) err << "warning: " << w << "\n";
  out << status << ": " << rc.kind << " -> " << (dir / "result.json").string() << "\n";
  return code;
}

}  // namespace levysg::cli
