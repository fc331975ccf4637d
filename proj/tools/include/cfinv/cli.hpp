#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfinv::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kGateFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericError = 3;

/// Runs one command; args excludes the program name. Artifacts go to `out`
/// unless --output names a file, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfinv::cli
