#pragma once

// Command-line front end: model tables, characters, invariant fits,
// verification batteries, Fock traces, the matrix lab and black-hole
// arithmetic.

#include <iosfwd>
#include <string>
#include <vector>

namespace cftspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitVerification = 2;

/// Runs one subcommand. args excludes the program name. Reports go to `out`
/// unless --output names a file; errors are one JSON object on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cftspec::cli
