#include "hartree/io.hpp"

#include "hartree/diagnostics.hpp"
#include "hartree/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hartree {

DiagnosticsRecord measure_diagnostics(const RadialGrid& grid, const FieldState& u, const ModelParams& params,
                                      const std::vector<double>& radii, double morawetz_R) {
  DiagnosticsRecord rec;
  rec.t = u.time();
  rec.mass = mass(grid, u);
  const EnergyBreakdown e = energy(grid, u, params);
  rec.kinetic = e.kinetic;
  rec.potential = e.potential;
  rec.energy = e.total;
  rec.sup_abs = u.values().cwiseAbs().maxCoeff();
  rec.sobolev_norm = lp_norm(grid, u, sobolev_exponent(grid.dimension()));
  rec.h1dot = h1dot_norm(grid, u);
  for (double R : radii) rec.local_masses.push_back(local_mass(grid, u, R));
  rec.boundary_fraction = boundary_mass_fraction(grid, u);
  rec.morawetz_action = morawetz_action(grid, u, morawetz_R);
  return rec;
}

std::vector<std::string> diagnostics_header(const std::vector<double>& radii) {
  std::vector<std::string> h{"t", "mass", "kinetic", "potential", "energy", "sup_abs", "sobolev_norm", "h1dot"};
  for (double R : radii) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "local_mass_R%g", R);
    h.emplace_back(buf);
  }
  h.emplace_back("boundary_fraction");
  h.emplace_back("morawetz_action");
  return h;
}

std::string format_scientific(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string numeric_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw Error("CSV row width does not match its header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!std::isfinite(row[i])) throw NumericFailure("non-finite value in CSV column '" + header[i] + "'");
      out << (i ? "," : "") << format_scientific(row[i]);
    }
    out << "\n";
  }
  return out.str();
}

std::string diagnostics_csv(const std::vector<double>& radii, const std::vector<DiagnosticsRecord>& rows) {
  std::vector<std::vector<double>> table;
  table.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.local_masses.size() != radii.size()) throw Error("diagnostics record has the wrong number of radii");
    std::vector<double> row{r.t, r.mass, r.kinetic, r.potential, r.energy, r.sup_abs, r.sobolev_norm, r.h1dot};
    row.insert(row.end(), r.local_masses.begin(), r.local_masses.end());
    row.push_back(r.boundary_fraction);
    row.push_back(r.morawetz_action);
    table.push_back(std::move(row));
  }
  return numeric_csv(diagnostics_header(radii), table);
}

}  // namespace hartree
