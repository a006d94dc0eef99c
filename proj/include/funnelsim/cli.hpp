#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace funnelsim {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitInadmissible = 3,
  kExitStepCollapse = 4,
  kExitVerification = 5,
  kExitCausality = 6,
};

/// Entry point of the `funnelsim` tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace funnelsim
