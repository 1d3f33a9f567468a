#pragma once

#include <ostream>
#include <string>

#include "levysg/cli/run_config.hpp"

namespace levysg::cli {

enum ExitCode { kExitOk = 0, kExitError = 1, kExitWarnings = 2 };

/// Runs one subcommand.  Artifacts (result.json, CSV tables, run.log) go to
/// the output directory, which is created only once the config validates.
int run(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Symbols, coefficient fields and experiments, one section each.
std::string list_catalog();

}  // namespace levysg::cli
