#pragma once

#include <string>

#include "CLI11.hpp"

namespace curvflow::cli {

/// Fills options of `sub` that were not given on the command line from the
/// JSON object at `path`. Keys are long option names without dashes; unknown
/// keys, non-object documents and type mismatches raise UsageError.
void apply_json_config(CLI::App& sub, const std::string& path);

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace curvflow::cli
