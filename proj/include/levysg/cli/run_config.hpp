#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "levysg/config.hpp"
#include "levysg/hoh.hpp"
#include "levysg/spectral.hpp"
#include "levysg/symbols.hpp"

namespace levysg::cli {

/// Command-line state shared by all subcommands.
struct CliOptions {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::vector<std::string> overrides;
  std::optional<double> theta_prime, rho;
  std::optional<int> n_ray, n_arc;
};

/// Experiment kind bound to each subcommand ("" for list-catalog).
std::string kind_for_subcommand(const std::string& sub);
std::vector<std::string> experiment_catalog();

std::string fnv1a_hex(const std::string& text);

/// Every value read from the config, with whether it came from a default.
struct ResolvedLog {
  std::map<std::string, std::string> values;
  std::set<std::string> defaulted;
  std::set<std::string> consumed;  // dotted keys, or whole tables

  void record(const std::string& key, const std::string& value, bool is_default);
};

/// View of one table that logs reads and marks keys consumed.
class Section {
 public:
  Section(const Table* t, std::string path, std::shared_ptr<ResolvedLog> log);

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  double number(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  long long large_integer(const std::string& key, long long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  /// Array of arrays, e.g. points.
  std::vector<std::vector<double>> points(const std::string& key, const std::vector<std::vector<double>>& fallback) const;
  Section sub(const std::string& key) const;
  /// Symbol block parsed as a whole.
  SymbolDescriptor symbol(const std::string& key) const;
  std::optional<SymbolDescriptor> optional_symbol(const std::string& key) const;
  std::string full(const std::string& key) const;

 private:
  const Table* t_;
  std::string path_;
  std::shared_ptr<ResolvedLog> log_;
};

struct RunConfig {
  Table root;
  std::string kind;
  std::string hash;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir;
  bool write_csv = true;
  std::shared_ptr<ResolvedLog> log = std::make_shared<ResolvedLog>();

  Section section(const std::string& key) const;
  Section top() const;
  /// Throws ConfigError naming the first key no experiment parameter consumed.
  void reject_unknown_keys() const;
};

/// Reads, overrides and hashes the config; validates the experiment kind.
RunConfig load_run_config(const CliOptions& opt);

GridSpec grid_from(const Section& s, int default_dim);
CoefficientField coefficients_from(const Section& s, int dim);

}  // namespace levysg::cli
