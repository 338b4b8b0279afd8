#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qzone::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kValidationError = 2,
  kSolverError = 3,
};

/// Entry point shared by the qzone executable and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "N" means seeds 0..N-1; "a,b,c" lists seeds explicitly.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

}  // namespace qzone::cli
