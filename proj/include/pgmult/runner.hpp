#pragma once

#include <iosfwd>
#include <string>

namespace pgmult {

inline constexpr const char* kVersion = "0.1.0";

// Execute a run/gen configuration. Throws ConfigError / DataError /
// LinAlgError; the CLI maps those to exit codes 1 / 2 / 3.
void run_config_file(const std::string& path, std::ostream& log);
void gen_config_file(const std::string& path, std::ostream& log);

// Built-in invariant suite; prints one line per check, returns true when all
// checks pass.
bool selfcheck(std::ostream& out);

}  // namespace pgmult
