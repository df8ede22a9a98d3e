#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace req2tc::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

/// `args` excludes the program name. REQ2TC_SEED, when set, overrides --seed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace req2tc::cli
