#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eklab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitParameter = 2;

/// Runs one subcommand. `args` excludes the program name. Diagnostics go to
/// `err`, short progress/summary lines to `out`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace eklab::cli
