#pragma once

// Subcommand bodies. Each returns a process exit code and reports problems
// on `err`.

#include <iosfwd>

#include "qcentral/config.hpp"

namespace qcentral {

enum ExitCode : int {
  kExitOk = 0,
  kExitSuiteFailure = 1,
  kExitConfigError = 2,
  kExitResourceError = 3,
};

int cmd_census(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_moments(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_lvalue(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qcentral
