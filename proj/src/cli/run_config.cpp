#include "levysg/cli/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace levysg::cli {

namespace {

std::string num_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list_text(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num_text(v[i]);
  return s + "]";
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

void collect_leaves(const Table& t, const std::string& path, std::vector<std::string>& out) {
  for (const auto& [k, v] : t.entries()) {
    std::string p = join(path, k);
    if (v.is_table())
      collect_leaves(v.as_table(p), p, out);
    else
      out.push_back(p);
  }
}

}  // namespace

std::string kind_for_subcommand(const std::string& sub) {
  if (sub == "classify") return "classify";
  if (sub == "smoothing-run") return "smoothing";
  if (sub == "resolvent-check") return "resolvent";
  if (sub == "sde-simulate") return "sde";
  if (sub == "generator-check") return "generator-check";
  if (sub == "maximizer-check") return "maximizer";
  return "";
}

std::vector<std::string> experiment_catalog() {
  return {"classify", "smoothing", "resolvent", "sde", "generator-check", "maximizer"};
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ResolvedLog::record(const std::string& key, const std::string& value, bool is_default) {
  values[key] = value;
  consumed.insert(key);
  if (is_default)
    defaulted.insert(key);
  else
    defaulted.erase(key);
}

Section::Section(const Table* t, std::string path, std::shared_ptr<ResolvedLog> log)
    : t_(t), path_(std::move(path)), log_(std::move(log)) {}

std::string Section::full(const std::string& key) const { return join(path_, key); }

bool Section::has(const std::string& key) const { return t_ && t_->has(key); }

double Section::number(const std::string& key, double fallback) const {
  double v = has(key) ? t_->at(key).as_number(full(key)) : fallback;
  if (!std::isfinite(v) && has(key)) throw ConfigError(full(key), "must be finite");
  log_->record(full(key), num_text(v), !has(key));
  return v;
}

double Section::number(const std::string& key) const {
  if (!has(key)) throw ConfigError(full(key), "missing required key");
  return number(key, 0.0);
}

int Section::integer(const std::string& key, int fallback) const {
  int v = t_ ? t_->integer(key, fallback) : fallback;
  if (has(key)) {
    double d = t_->at(key).as_number(full(key));
    if (d != std::floor(d)) throw ConfigError(full(key), "expected an integer");
  }
  log_->record(full(key), std::to_string(v), !has(key));
  return v;
}

long long Section::large_integer(const std::string& key, long long fallback) const {
  long long v = fallback;
  if (has(key)) {
    double d = t_->at(key).as_number(full(key));
    if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError(full(key), "expected an integer");
    v = static_cast<long long>(d);
  }
  log_->record(full(key), std::to_string(v), !has(key));
  return v;
}

bool Section::boolean(const std::string& key, bool fallback) const {
  bool v = has(key) ? t_->at(key).as_bool(full(key)) : fallback;
  log_->record(full(key), v ? "true" : "false", !has(key));
  return v;
}

std::string Section::string(const std::string& key, const std::string& fallback) const {
  std::string v = has(key) ? t_->at(key).as_string(full(key)) : fallback;
  log_->record(full(key), v, !has(key));
  return v;
}

std::vector<double> Section::numbers(const std::string& key, const std::vector<double>& fallback) const {
  std::vector<double> v = fallback;
  if (has(key)) {
    v.clear();
    for (const auto& e : t_->at(key).as_array(full(key))) v.push_back(e.as_number(full(key)));
  }
  log_->record(full(key), list_text(v), !has(key));
  return v;
}

std::vector<std::vector<double>> Section::points(const std::string& key,
                                                 const std::vector<std::vector<double>>& fallback) const {
  std::vector<std::vector<double>> v = fallback;
  if (has(key)) {
    v.clear();
    for (const auto& e : t_->at(key).as_array(full(key))) {
      std::vector<double> p;
      if (e.is_number()) {
        p.push_back(e.as_number(full(key)));
      } else {
        for (const auto& c : e.as_array(full(key))) p.push_back(c.as_number(full(key)));
      }
      v.push_back(std::move(p));
    }
  }
  std::string text = "[";
  for (std::size_t i = 0; i < v.size(); ++i) text += (i ? ", " : "") + list_text(v[i]);
  log_->record(full(key), text + "]", !has(key));
  return v;
}

Section Section::sub(const std::string& key) const {
  const Table* t = t_ ? t_->table(key) : nullptr;
  return Section(t, full(key), log_);
}

SymbolDescriptor Section::symbol(const std::string& key) const {
  const Table* t = t_ ? t_->table(key) : nullptr;
  if (!t) throw ConfigError(full(key), "missing symbol block");
  auto s = symbol_from_table(*t, full(key));
  log_->record(full(key), canonical_text(*t), false);
  return s;
}

std::optional<SymbolDescriptor> Section::optional_symbol(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return symbol(key);
}

Section RunConfig::section(const std::string& key) const { return Section(root.table(key), key, log); }
Section RunConfig::top() const { return Section(&root, "", log); }

void RunConfig::reject_unknown_keys() const {
  std::vector<std::string> leaves;
  collect_leaves(root, "", leaves);
  for (const auto& leaf : leaves) {
    bool ok = false;
    for (const auto& c : log->consumed)
      if (leaf == c || leaf.rfind(c + ".", 0) == 0) ok = true;
    if (!ok) throw ConfigError(leaf, "unknown key for experiment '" + kind + "'");
  }
}

RunConfig load_run_config(const CliOptions& opt) {
  if (opt.config_path.empty()) throw ConfigError("config", "no config file given (use --config)");
  RunConfig rc;
  rc.root = parse_config_file(opt.config_path);
  if (rc.root.entries().empty()) throw ConfigError("config", "config file '" + opt.config_path + "' is empty");
  for (const auto& o : opt.overrides) apply_override(rc.root, o);
  if (opt.seed) rc.root.set("seed", Value{static_cast<double>(*opt.seed)});
  auto put = [&](const char* key, double v) { rc.root.subtable("contour").set(key, Value{v}); };
  if (opt.theta_prime) put("theta_prime", *opt.theta_prime);
  if (opt.rho) put("rho", *opt.rho);
  if (opt.n_ray) put("n_ray", *opt.n_ray);
  if (opt.n_arc) put("n_arc", *opt.n_arc);

  const std::string expected = kind_for_subcommand(opt.subcommand);
  const Table* exp = rc.root.table("experiment");
  rc.kind = exp && exp->has("kind") ? exp->string("kind") : expected;
  if (rc.kind != expected)
    throw ConfigError("experiment.kind", "config is for '" + rc.kind + "' but the subcommand runs '" + expected + "'");

  Section top = rc.top();
  long long seed = top.large_integer("seed", 1);
  if (seed < 0) throw ConfigError("seed", "seed must be nonnegative");
  rc.seed = static_cast<std::uint64_t>(seed);
  rc.section("experiment").string("kind", expected);
  rc.jobs = std::max(1, opt.jobs);

  Section out = rc.section("output");
  std::string dir = out.string("directory", "out");
  rc.out_dir = opt.out_dir.empty() ? dir : opt.out_dir;
  auto formats = out.has("formats") ? std::vector<std::string>{} : std::vector<std::string>{"json", "csv"};
  if (out.has("formats")) {
    const auto& arr = rc.root.table("output")->at("formats").as_array("output.formats");
    for (const auto& v : arr) {
      const auto& f = v.as_string("output.formats");
      if (f != "json" && f != "csv") throw ConfigError("output.formats", "unknown format '" + f + "'");
      formats.push_back(f);
    }
    rc.log->record("output.formats", std::to_string(formats.size()) + " formats", false);
  }
  rc.write_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
  rc.hash = fnv1a_hex(canonical_text(rc.root));
  return rc;
}

GridSpec grid_from(const Section& s, int default_dim) {
  int d = s.integer("d", default_dim);
  int n = s.integer("n", d == 1 ? 16384 : 128);
  double L = s.number("L", d == 1 ? 32.0 : 16.0);
  try {
    return GridSpec(d, n, L);
  } catch (const Error& e) {
    throw ConfigError(s.full("n"), e.what());
  }
}

CoefficientField coefficients_from(const Section& s, int dim) {
  auto field = [&](const std::string& role) {
    std::string name = s.string(role, "constant");
    double value = s.number(role + "_value", 1.0);
    double slope = s.number(role + "_slope", 0.0);
    try {
      return ScalarField::from_name(name, value, slope);
    } catch (const Error& e) {
      throw ConfigError(s.full(role), e.what());
    }
  };
  ScalarField sg = field("sigma"), b = field("b");
  CoefficientField c;
  c.dim = dim;
  c.sigma.assign(dim, sg);
  c.b.assign(dim, b);
  c.c_lo = s.number("c_lo", 0.0);
  c.c_hi = s.has("c_hi") ? s.number("c_hi") : HUGE_VAL;
  if (!(c.c_lo >= 0 && c.c_hi >= c.c_lo)) throw ConfigError(s.full("c_lo"), "need 0 <= c_lo <= c_hi");
  return c;
}

}  // namespace levysg::cli
