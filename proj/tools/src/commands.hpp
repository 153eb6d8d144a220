#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyscat::cli {

/// Exit codes.
enum : int { kOk = 0, kNumericalFailure = 2, kInputError = 3, kSingularConfiguration = 4 };

/// Entry point of the `polyscat` tool: forward, spectra, indicate,
/// reconstruct and verify-reflection subcommands.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] supplied.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exit code for a library error kind.
int exit_code_for(const std::string& kind);

}  // namespace polyscat::cli
