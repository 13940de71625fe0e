#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace analogy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInternal = 70;

/// Runs one command line (args[0] is the program name). Primary output goes
/// to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exit status for an exception escaping a subcommand: analogy::Error maps to
/// kExitData (kExitUsage for bad arguments), anything else to kExitInternal.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace analogy::cli
