#pragma once

#include <iosfwd>

namespace hyperwave::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

/// Parses argv and runs one subcommand: kernel, decay-fit, group, quotient or
/// exponents. Tables go to --out (or `out`), diagnostics as JSON to `err`.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hyperwave::cli
