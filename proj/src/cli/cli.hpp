#pragma once

#include <iosfwd>

namespace curvflow::cli {

enum ExitCode : int { kSuccess = 0, kCertifiedFailure = 1, kUsage = 2, kNumericalGuard = 3 };

/// Entry point for the `curvflow` binary; writes reports to `out` and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvflow::cli
