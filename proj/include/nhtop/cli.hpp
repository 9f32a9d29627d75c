// cli.hpp — Command-line front end
//
// Subcommands: spectrum, coherence, winding, table1, scaling, disorder, model.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nhtop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nhtop::cli
