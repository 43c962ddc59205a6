#pragma once

#include "hartree/cascade.hpp"
#include "hartree/config.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hartree::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNumericFailure = 3,
  kInvariantViolation = 4,
};

/// Dispatches `hartree <subcommand> ...`; every library error is turned
/// into a one-line message on `err` and its exit code.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Interval lengths for the cascade subcommand. Optional `key = value`
/// lines (a, eta, C1, start) followed by one positive length per line.
struct TilingFile {
  double a = 0.5;
  double start = 0.0;
  SixConstants constants;
  std::vector<double> lengths;
};

TilingFile parse_tiling(std::string_view text);
TilingFile load_tiling(const std::string& path);

/// Output directory: explicit flag, then HARTREE_OUTPUT_DIR, then the config.
std::string resolve_output_dir(const std::string& flag, const std::string& configured);

Trajectory run_simulation(const RunConfig& config);

/// Runs the invariant suite, printing one PASS/FAIL line per invariant.
/// Returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace hartree::cli
