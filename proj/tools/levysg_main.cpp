#include <iostream>

#include <CLI11.hpp>

#include "levysg/cli/runner.hpp"

int main(int argc, char** argv) {
  using levysg::cli::CliOptions;
  CLI::App app{"Levy-driven semigroup smoothing experiments"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Config file")->required();
    sub->add_option("--out", opt.out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
    sub->add_option("--jobs", opt.jobs, "Worker ceiling")->check(CLI::PositiveNumber);
    sub->add_option("--override", opt.overrides, "key=value, repeatable")->take_all();
  };

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"classify", "Index, sector and negative-definiteness report for psi"},
      {"smoothing-run", "Fit the decay exponent of |B P_t u| in H^rho"},
      {"resolvent-check", "Fit the decay of |B R(lambda) u| along a ray"},
      {"sde-simulate", "Monte Carlo estimate of E f(X^x(t))"},
      {"generator-check", "Monte Carlo symbol extraction against psi(sigma(x) xi)"},
      {"maximizer-check", "Closed-form vs numeric maximizer of xi^s2/(lambda + xi^s1)"},
  };
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (name == "smoothing-run") {
      sub->add_option("--theta-prime", opt.theta_prime, "Contour ray angle beyond pi/2");
      sub->add_option("--rho", opt.rho, "Contour arc radius");
      sub->add_option("--n-ray", opt.n_ray, "Nodes per contour ray");
      sub->add_option("--n-arc", opt.n_arc, "Nodes on the contour arc");
    }
    sub->callback([&opt, name = name] { opt.subcommand = name; });
  }
  app.add_subcommand("list-catalog", "List symbols, coefficient fields and experiments")
      ->callback([&opt] { opt.subcommand = "list-catalog"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : levysg::cli::kExitError;
  }
  return levysg::cli::run(opt, std::cout, std::cerr);
}
