#pragma once

#include <ostream>

namespace repsuff::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;        // usage, parse or validation errors
constexpr int kExitInsufficient = 2; // insufficiency / failed verification verdict
constexpr int kExitGuard = 3;        // enumeration or trajectory guard refusal

/// Full command-line front end (sweep, check, verify, identity, export).
/// Returns the process exit code; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace repsuff::cli
