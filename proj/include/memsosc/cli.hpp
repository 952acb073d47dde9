#pragma once

#include <ostream>
#include <string>
#include <string_view>

namespace memsosc {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Entry point of the `memsosc` tool. Output meant for the user goes to
/// `out`, diagnostics to `err`; files go under `--out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

}  // namespace memsosc
