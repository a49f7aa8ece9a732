#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace granular::cli {

/// Runs one `granular` invocation. `args` excludes the program name.
/// Returns the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace granular::cli
