#pragma once

#include "hartree/interval_machinery.hpp"
#include "hartree/nonlinearity.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hartree {

struct InitialData {
  std::string profile = "gaussian";  ///< gaussian | bump | table
  double amplitude = 1.0;
  double width = 1.0;
  std::string table;  ///< path of a `r re [im]` table when profile = table
  bool operator==(const InitialData&) const = default;
};

struct RunConfig {
  ModelParams model;
  int N = 0;
  double r_max = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  int record_every = 1;
  InitialData initial;
  SixConstants constants;
  SixConstants pedagogical;
  std::vector<double> radii{1.0, 2.0, 5.0};
  double morawetz_R = 5.0;
  double morawetz_A = 1.0;
  bool strict_boundary = false;
  std::string output_dir = "output";
  std::uint64_t seed = 1;

  bool operator==(const RunConfig& o) const;
};

/// Strict `key = value` parser with `#` comments. Unknown, duplicate,
/// malformed or out-of-range keys raise ConfigError with the line number;
/// missing required keys report the line past the end of the text.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Every key with its effective value; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Initial field described by the config on the given grid.
FieldState make_initial_state(const RunConfig& config, const GridPtr& grid);

}  // namespace hartree
