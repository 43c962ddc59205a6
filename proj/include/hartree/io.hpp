#pragma once

#include "hartree/field_state.hpp"
#include "hartree/nonlinearity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hartree {

/// Writes `bytes` to a temporary sibling of `path` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& bytes);

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointHeader {
  std::uint32_t version = kCheckpointVersion;
  int n = 0;
  int N = 0;
  double r_max = 0.0;
  double t = 0.0;
};

/// Binary layout, little-endian: "HRTL", u32 version, then n, N, r_max, t
/// as f64, then N interleaved (re, im) f64 pairs.
void write_checkpoint(const std::string& path, const FieldState& u);

/// Throws FormatError on a bad magic, unknown version or short file.
CheckpointHeader read_checkpoint_header(const std::string& path);
/// Throws GridMismatch when the stored grid differs from `grid`.
FieldState read_checkpoint(const std::string& path, const GridPtr& grid);
/// Builds the grid described by the file.
FieldState read_checkpoint(const std::string& path);

/// One row of the diagnostics CSV.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double energy = 0.0;
  double sup_abs = 0.0;
  double sobolev_norm = 0.0;  ///< ||u||_{2n/(n-2)}
  double h1dot = 0.0;
  std::vector<double> local_masses;  ///< one per configured radius
  double boundary_fraction = 0.0;
  double morawetz_action = 0.0;
};

DiagnosticsRecord measure_diagnostics(const RadialGrid& grid, const FieldState& u, const ModelParams& params,
                                      const std::vector<double>& radii, double morawetz_R);

std::vector<std::string> diagnostics_header(const std::vector<double>& radii);

/// "%.16e" everywhere, so every double is written with 17 significant digits.
std::string format_scientific(double x);

/// Header row plus one row per record. Throws NumericFailure on a
/// non-finite entry.
std::string diagnostics_csv(const std::vector<double>& radii, const std::vector<DiagnosticsRecord>& rows);

/// Generic table with a header and numeric rows in the same format.
std::string numeric_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace hartree
