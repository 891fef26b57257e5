#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aoii::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitCertification = 4;

/// Runs the `aoii` command line. args excludes the program name. Results go
/// to `out` (or the --out file), the single-line diagnostic of a failure goes
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace aoii::cli
