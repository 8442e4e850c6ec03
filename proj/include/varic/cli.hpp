#pragma once

// Command-line front end: `varic <command> <file.vp> [options]`.

#include <ostream>
#include <string>
#include <vector>

namespace varic::cli {

enum ExitCode : int {
    kSuccess = 0,      // variational, or the determining system was solved
    kNegative = 1,     // not variational, or no nontrivial multiplier
    kUnsolved = 2,     // determining system emitted but not solved
    kUsage = 64,
    kDataError = 65,   // parse errors and inputs outside the supported class
    kInternal = 70,    // a self-check failed
};

inline constexpr int kSchemaVersion = 1;

/// Runs one command. `args` excludes the program name. The output document
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varic::cli
