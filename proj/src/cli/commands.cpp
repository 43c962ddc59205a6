#include "cli/commands.hpp"

#include "hartree/diagnostics.hpp"
#include "hartree/errors.hpp"
#include "hartree/io.hpp"
#include "oracles/oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hartree::cli {

namespace fs = std::filesystem;

// ---- tiling files ----------------------------------------------------------

TilingFile parse_tiling(std::string_view text) {
  TilingFile tiling;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto number = [&](std::string_view v) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
      throw ConfigError(line_no, "expected a number, got '" + std::string(v) + "'");
    return x;
  };
  auto trim = [](std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return std::string_view{};
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (const auto eq = line.find('='); eq != std::string_view::npos) {
      if (!tiling.lengths.empty()) throw ConfigError(line_no, "settings must precede the interval lengths");
      const auto key = trim(line.substr(0, eq));
      const double v = number(trim(line.substr(eq + 1)));
      if (key == "a") {
        if (!(v > 0.0 && v < 1.0)) throw ConfigError(line_no, "a must lie in (0, 1)");
        tiling.a = v;
      } else if (key == "eta") {
        if (!(v > 0.0 && v < 1.0)) throw ConfigError(line_no, "eta must lie in (0, 1)");
        tiling.constants.eta = v;
      } else if (key == "C1") {
        if (!(v >= 1.0 && v == std::floor(v))) throw ConfigError(line_no, "C1 must be a positive integer");
        tiling.constants.C1 = static_cast<int>(v);
      } else if (key == "start") {
        tiling.start = v;
      } else {
        throw ConfigError(line_no, "unknown tiling key '" + std::string(key) + "'");
      }
      continue;
    }
    const double len = number(line);
    if (!(len > 0.0)) throw ConfigError(line_no, "interval lengths must be positive");
    tiling.lengths.push_back(len);
  }
  if (tiling.lengths.empty()) throw ConfigError(line_no + 1, "tiling file holds no interval lengths");
  return tiling;
}

TilingFile load_tiling(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open tiling file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tiling(buf.str());
}

std::string resolve_output_dir(const std::string& flag, const std::string& configured) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("HARTREE_OUTPUT_DIR"); env && *env) return env;
  return configured;
}

Trajectory run_simulation(const RunConfig& config) {
  config.model.validate();
  const GridPtr grid = build_radial_grid(config.model.n, config.N, config.r_max);
  const FieldState u0 = make_initial_state(config, grid);
  return evolve(*grid, u0, config.model, config.t_end, config.dt, config.record_every);
}

namespace {

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
  return line + "\n";
}

std::string sci(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_scientific(x);
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const fs::path kCheckpointDir = "checkpoints";

// ---- checkpoints on disk ---------------------------------------------------

struct StoredRun {
  std::vector<FieldState> states;  // every checkpoint, time ordered
  std::size_t uniform = 0;         // leading states on a uniform time grid
};

StoredRun load_stored_run(const RunConfig& cfg, const std::string& dir) {
  const fs::path folder = fs::path(dir) / kCheckpointDir;
  if (!fs::is_directory(folder)) throw Error("no checkpoints under '" + folder.string() + "'; run simulate first");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(folder))
    if (entry.path().extension() == ".hrtl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no checkpoints under '" + folder.string() + "'");
  const GridPtr grid = build_radial_grid(cfg.model.n, cfg.N, cfg.r_max);
  StoredRun run;
  for (const auto& f : files) run.states.push_back(read_checkpoint(f.string(), grid));
  std::stable_sort(run.states.begin(), run.states.end(),
                   [](const FieldState& a, const FieldState& b) { return a.time() < b.time(); });
  run.uniform = std::min<std::size_t>(run.states.size(), 2);
  if (run.states.size() > 2) {
    const double step = run.states[1].time() - run.states[0].time();
    while (run.uniform < run.states.size()) {
      const double expect = run.states[0].time() + step * static_cast<double>(run.uniform);
      if (std::abs(run.states[run.uniform].time() - expect) > 1e-9 * std::max(1.0, std::abs(expect))) break;
      ++run.uniform;
    }
  }
  return run;
}

Trajectory uniform_trajectory(const RunConfig& cfg, const StoredRun& run) {
  std::vector<FieldState> states(run.states.begin(), run.states.begin() + static_cast<std::ptrdiff_t>(run.uniform));
  const double dt_record = states.size() > 1 ? states[1].time() - states[0].time() : cfg.dt;
  // Re-stamp times on the exact uniform lattice so the trajectory check
  // does not trip on rounding in the stored times.
  for (std::size_t i = 0; i < states.size(); ++i)
    states[i] = states[i].at_time(states[0].time() + dt_record * static_cast<double>(i));
  const GridPtr grid = states.front().grid_ptr();
  return Trajectory(grid, cfg.model, std::move(states), dt_record, cfg.dt, Integrator::strang);
}

// ---- subcommands ------------------------------------------------------------

int simulate(const std::string& config_path, const std::string& output_flag, std::ostream& out,
             std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const std::string dir = resolve_output_dir(output_flag, cfg.output_dir);
  const Trajectory traj = run_simulation(cfg);
  const auto& grid = traj.grid();

  fs::create_directories(fs::path(dir) / kCheckpointDir);
  write_file_atomic((fs::path(dir) / "effective_config.txt").string(), emit_config(cfg));

  std::vector<DiagnosticsRecord> rows;
  rows.reserve(traj.size());
  for (const auto& u : traj.states())
    rows.push_back(measure_diagnostics(grid, u, cfg.model, cfg.radii, cfg.morawetz_R));
  write_file_atomic((fs::path(dir) / "diagnostics.csv").string(), diagnostics_csv(cfg.radii, rows));

  for (const auto& entry : fs::directory_iterator(fs::path(dir) / kCheckpointDir))
    if (entry.path().extension() == ".hrtl") fs::remove(entry.path());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i % 10 != 0 && i + 1 != traj.size()) continue;
    char name[64];
    std::snprintf(name, sizeof name, "state_%010zu.hrtl", i * static_cast<std::size_t>(cfg.record_every));
    write_checkpoint((fs::path(dir) / kCheckpointDir / name).string(), traj[i]);
  }

  double mass_drift = 0.0, energy_drift = 0.0;
  for (const auto& r : rows) {
    mass_drift = std::max(mass_drift, relative(r.mass, rows.front().mass));
    energy_drift = std::max(energy_drift, relative(r.energy, rows.front().energy));
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "simulate: %zu records to t = %.6g, max relative mass drift %.3e, energy drift %.3e\n",
                traj.size(), traj.t_end(), mass_drift, energy_drift);
  out << buf;
  if (traj.any_boundary_flag()) {
    const auto first = std::find(traj.boundary_flags().begin(), traj.boundary_flags().end(), true);
    const double t = traj[static_cast<std::size_t>(first - traj.boundary_flags().begin())].time();
    std::snprintf(buf, sizeof buf, "boundary mass fraction exceeds %.0e from t = %.6g", kBoundaryMassThreshold, t);
    if (cfg.strict_boundary) throw InvariantViolation(buf);
    err << "warning: " << buf << "\n";
  }
  out << "wrote " << dir << "/diagnostics.csv and checkpoints\n";
  return kOk;
}

int diagnose(const std::string& config_path, const std::string& output_flag, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const std::string dir = resolve_output_dir(output_flag, cfg.output_dir);
  const StoredRun run = load_stored_run(cfg, dir);
  const auto& grid = run.states.front().grid();

  std::vector<std::vector<double>> drift_rows;
  const double m0 = mass(grid, run.states.front());
  const double e0 = energy(grid, run.states.front(), cfg.model).total;
  double max_mass = 0.0, max_energy = 0.0;
  for (const auto& u : run.states) {
    const double m = mass(grid, u);
    const double e = energy(grid, u, cfg.model).total;
    drift_rows.push_back({u.time(), m, e, relative(m, m0), relative(e, e0)});
    max_mass = std::max(max_mass, relative(m, m0));
    max_energy = std::max(max_energy, relative(e, e0));
  }
  write_file_atomic((fs::path(dir) / "drift.csv").string(),
                    numeric_csv({"t", "mass", "energy", "mass_drift", "energy_drift"}, drift_rows));

  std::ostringstream rep;
  char buf[512];
  rep << "# diagnostics recomputed from " << run.states.size() << " checkpoints\n";
  std::snprintf(buf, sizeof buf, "max_mass_drift = %.6e\nmax_energy_drift = %.6e\n", max_mass, max_energy);
  rep << buf;

  const Trajectory traj = uniform_trajectory(cfg, run);
  std::size_t flagged = 0;
  for (bool f : traj.boundary_flags()) flagged += f ? 1 : 0;
  rep << "boundary_flagged_states = " << flagged << "\n";
  if (traj.size() >= 2) {
    const auto mb = morawetz_budget(traj, traj.t_begin(), traj.t_end(), cfg.morawetz_A);
    std::snprintf(buf, sizeof buf,
                  "\n# morawetz budget on [%.6g, %.6g], A = %.6g\nlinear = %.10e\nbilinear = %.10e\n"
                  "rhs_scale = %.10e\nratio = %.10e\n",
                  mb.t1, mb.t2, mb.A, mb.linear_term, mb.bilinear_term, mb.rhs_scale, mb.ratio);
    rep << buf;
    rep << "\n# local mass constants: R drift small_volume\n";
    for (double R : cfg.radii) {
      const auto c = measure_local_mass_constants(traj, R);
      std::snprintf(buf, sizeof buf, "%.6g %.10e %.10e\n", R, c.drift, c.small_volume);
      rep << buf;
    }
  }
  rep << "\n# dispersive decay at p = inf: t sup|u| product\n";
  for (const auto& d : dispersive_decay_report(traj, std::numeric_limits<double>::infinity())) {
    std::snprintf(buf, sizeof buf, "%.10g %.10e %.10e\n", d.t, d.norm, d.product);
    rep << buf;
  }
  write_file_atomic((fs::path(dir) / "diagnostics_report.txt").string(), rep.str());
  std::snprintf(buf, sizeof buf, "diagnose: %zu checkpoints, max relative mass drift %.3e, energy drift %.3e\n",
                run.states.size(), max_mass, max_energy);
  out << buf << "wrote " << dir << "/drift.csv and diagnostics_report.txt\n";
  return kOk;
}

int intervals(const std::string& config_path, const std::string& output_flag, bool pedagogical,
              std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const std::string dir = resolve_output_dir(output_flag, cfg.output_dir);
  const SixConstants constants = pedagogical ? cfg.pedagogical : cfg.constants;
  const Trajectory traj = run_simulation(cfg);
  IntervalTiling tiling = partition_by_x_norm(traj, constants.eta);
  tiling = classify_exceptional(std::move(tiling), traj, constants);
  const BubbleReport bubbles = bubble_report(traj, tiling, constants);
  const auto control = interval_control_report(tiling, constants);

  std::string csv = join_row({"index", "begin", "end", "length", "x_norm", "tail", "label", "free_x_norm_minus",
                              "free_x_norm_plus"});
  for (std::size_t j = 0; j < tiling.intervals.size(); ++j) {
    const auto& i = tiling.intervals[j];
    csv += join_row({std::to_string(j), sci(i.begin), sci(i.end), sci(i.length()), sci(i.x_norm),
                     i.tail ? "1" : "0", to_string(i.label), sci(i.free_x_norm_minus), sci(i.free_x_norm_plus)});
  }
  write_file_atomic((fs::path(dir) / "intervals.csv").string(), csv);

  csv = join_row({"interval", "log_radius", "radius", "min_local_mass", "log_threshold", "ratio", "unresolved"});
  for (const auto& b : bubbles.records)
    csv += join_row({std::to_string(b.interval), sci(b.log_radius), sci(b.radius), sci(b.min_local_mass),
                     sci(b.log_threshold), sci(b.ratio), b.unresolved ? "1" : "0"});
  write_file_atomic((fs::path(dir) / "bubbles.csv").string(), csv);

  csv = join_row({"first", "last", "length", "sum_sqrt_lengths", "log_bound", "ratio", "longest_fraction",
                  "log_min_fraction"});
  for (const auto& c : control)
    csv += join_row({std::to_string(c.first), std::to_string(c.last), sci(c.length), sci(c.sum_sqrt_lengths),
                     sci(c.log_bound), sci(c.ratio), sci(c.longest_fraction), sci(c.log_min_fraction)});
  write_file_atomic((fs::path(dir) / "control.csv").string(), csv);

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "intervals: total X norm %.6g, %zu intervals (%zu exceptional, %zu unexceptional), overshoot %.3e%s\n",
                tiling.total_x_norm, tiling.intervals.size(), tiling.count(IntervalLabel::exceptional),
                tiling.count(IntervalLabel::unexceptional), tiling.max_overshoot,
                bubbles.vacuous ? ", bubble bound vacuous" : "");
  out << buf << "wrote " << dir << "/intervals.csv, bubbles.csv and control.csv\n";
  return kOk;
}

int cascade(const std::string& tiling_path, const std::string& config_path, const std::string& output_flag,
            bool print, std::ostream& out) {
  const TilingFile tiling = load_tiling(tiling_path);
  const CascadeResult result = cascade_generations(tiling.lengths, tiling.a, tiling.start);
  if (const auto problem = check_cascade_invariants(result)) throw InvariantViolation(*problem);

  std::string dir = resolve_output_dir(output_flag, "output");
  NonEvacuationReport rep;
  if (!config_path.empty()) {
    const RunConfig cfg = load_config(config_path);
    dir = resolve_output_dir(output_flag, cfg.output_dir);
    const Trajectory traj = uniform_trajectory(cfg, load_stored_run(cfg, dir));
    rep = nonevacuation_count(traj, result, tiling.constants);
  } else {
    rep = nonevacuation_count(result, tiling.constants);
  }
  const std::string text = format_cascade_report(result, rep);
  write_file_atomic((fs::path(dir) / "cascade_report.txt").string(), text);

  std::string csv = join_row({"index", "start", "length", "generation", "chain_position"});
  for (std::size_t j = 0; j < result.lengths.size(); ++j) {
    const auto it = std::find(result.chain.begin(), result.chain.end(), j);
    const std::size_t pos = it == result.chain.end() ? 0 : static_cast<std::size_t>(it - result.chain.begin()) + 1;
    csv += join_row({std::to_string(j), sci(result.start_of(j)), sci(result.lengths[j]),
                     std::to_string(result.generations[j]), std::to_string(pos)});
  }
  write_file_atomic((fs::path(dir) / "cascade.csv").string(), csv);

  if (print) {
    out << text;
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf, "cascade: %zu intervals, chain length K = %zu (lower bound %.4g), t* = %.10g\n",
                  result.lengths.size(), result.K(), result.length_lower_bound(), result.t_star);
    out << buf << "wrote " << dir << "/cascade_report.txt\n";
  }
  return kOk;
}

struct OracleOptions {
  int n = 5;
  double gamma = 4.0;
  int N = 512;
  double r_max = 20.0;
  std::uint64_t seed = 1;
  std::size_t samples = 1000000;
};

int run_oracles(const OracleOptions& o, const std::string& output_flag, std::ostream& out) {
  const std::string dir = resolve_output_dir(output_flag, "output");
  const GridPtr grid = build_radial_grid(o.n, o.N, o.r_max);
  const auto& r = grid->nodes();
  int failures = 0;
  char buf[256];
  auto verdict = [&](const char* name, bool ok, double measured, double tol) {
    std::snprintf(buf, sizeof buf, "%s %-28s measured %.3e  tolerance %.1e\n", ok ? "PASS" : "FAIL", name, measured,
                  tol);
    out << buf;
    if (!ok) ++failures;
  };

  // Riesz potential: spectral versus direct quadrature.
  // The bump's edge is only C-infinity, so its spectrum decays slowly; it
  // gets a box of radius 8 to keep the cell width near 1/64.
  struct Density {
    const char* name;
    oracle::RadialFunction f;
    double support;
    GridPtr grid;
  };
  const std::vector<Density> densities{
      {"gaussian", [](double s) { return std::exp(-s * s); }, 12.0, grid},
      {"bump", [](double s) { return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; }, 1.0,
       build_radial_grid(o.n, o.N, std::min(o.r_max, 8.0))},
  };
  std::vector<std::vector<double>> riesz_rows;
  double riesz_worst = 0.0;
  for (std::size_t d = 0; d < densities.size(); ++d) {
    const auto& dg = *densities[d].grid;
    const auto& nodes = dg.nodes();
    Eigen::VectorXd rho(dg.size());
    for (Eigen::Index k = 0; k < rho.size(); ++k) rho[k] = densities[d].f(nodes[k]);
    const Eigen::VectorXd spectral = riesz_convolve(dg, rho, o.gamma);
    const Eigen::Index stride = std::max<Eigen::Index>(1, dg.size() / 32);
    for (Eigen::Index k = 0; k < dg.size() && nodes[k] <= 0.5 * dg.r_max(); k += stride) {
      const double q = oracle::riesz_quadrature(o.n, o.gamma, densities[d].f, densities[d].support, nodes[k]);
      const double e = relative(spectral[k], q);
      riesz_worst = std::max(riesz_worst, e);
      riesz_rows.push_back({static_cast<double>(d), nodes[k], spectral[k], q, e});
    }
  }
  write_file_atomic((fs::path(dir) / "oracle_riesz.csv").string(),
                    numeric_csv({"density", "r", "spectral", "quadrature", "rel_err"}, riesz_rows));
  verdict("riesz vs quadrature", riesz_worst <= 1e-4, riesz_worst, 1e-4);

  // Gaussian closed forms.
  const FieldState g = FieldState::from_profile(grid, [](double s) { return Complex(std::exp(-s * s), 0.0); });
  const ModelParams params{o.n, o.gamma, 1.0};
  const EnergyBreakdown e = energy(*grid, g, params);
  const FieldState moved = free_propagate(*grid, g, 0.5);
  Eigen::VectorXcd exact(grid->size());
  for (Eigen::Index k = 0; k < exact.size(); ++k) exact[k] = oracle::free_gaussian(o.n, 0.5, r[k]);
  const double free_err = lp_norm(*grid, moved.with_values(moved.values() - exact), 2.0) / oracle::free_gaussian_l2(o.n);
  const double sup = moved.values().cwiseAbs().maxCoeff() * std::pow(0.5, 0.5 * o.n);
  // Spectral potential at the innermost node, which sits within h/2 of the origin.
  Eigen::VectorXd unit_gaussian(grid->size());
  for (Eigen::Index k = 0; k < unit_gaussian.size(); ++k) unit_gaussian[k] = std::exp(-r[k] * r[k]);
  const double origin = riesz_convolve(*grid, unit_gaussian, o.gamma)[0];
  struct Row {
    const char* name;
    double computed;
    double exact;
    double tol;
  };
  const std::vector<Row> gaussian_rows{
      {"mass", mass(*grid, g), oracle::gaussian_mass(o.n), 1e-10},
      {"kinetic", e.kinetic, oracle::gaussian_kinetic(o.n), 1e-8},
      {"potential", e.potential, oracle::gaussian_potential(o.n, o.gamma), 1e-4},
      {"riesz_origin", origin, oracle::riesz_gaussian_at_origin(o.n, o.gamma), 1e-3},
      {"decay_product_t0.5", sup, oracle::free_gaussian_decay_product(o.n, 0.5), 1e-3},
  };
  std::string csv = join_row({"quantity", "computed", "closed_form", "rel_err"});
  for (const auto& row : gaussian_rows) {
    const double err = relative(row.computed, row.exact);
    csv += join_row({row.name, sci(row.computed), sci(row.exact), sci(err)});
    verdict(row.name, err <= row.tol, err, row.tol);
  }
  csv += join_row({"free_l2_error_t0.5", sci(free_err), sci(0.0), sci(free_err)});
  verdict("free evolution L2", free_err <= 1e-6, free_err, 1e-6);
  write_file_atomic((fs::path(dir) / "oracle_gaussian.csv").string(), csv);

  // Cascade against the level-by-level reference.
  std::vector<std::vector<double>> cascade_rows;
  std::size_t mismatches = 0;
  const auto tilings = oracle::dyadic_tilings(8);
  for (double a : {0.25, 0.3, 0.5, 0.6}) {
    std::size_t accepted = 0, rejected = 0, bad = 0;
    for (const auto& lengths : tilings) {
      const auto ref = oracle::reference_cascade(lengths, a);
      try {
        const auto got = cascade_generations(lengths, a);
        ++accepted;
        if (!ref.hypothesis_holds || got.generations != ref.generations || got.chain != ref.chain ||
            got.t_star != ref.t_star || check_cascade_invariants(got))
          ++bad;
      } catch (const CascadeHypothesisError&) {
        ++rejected;
        if (ref.hypothesis_holds) ++bad;
      }
    }
    mismatches += bad;
    cascade_rows.push_back({a, static_cast<double>(tilings.size()), static_cast<double>(accepted),
                            static_cast<double>(rejected), static_cast<double>(bad)});
  }
  write_file_atomic((fs::path(dir) / "oracle_cascade.csv").string(),
                    numeric_csv({"a", "tilings", "accepted", "rejected", "mismatches"}, cascade_rows));
  verdict("cascade vs reference", mismatches == 0, static_cast<double>(mismatches), 0.0);

  // Bilinear Morawetz term against Monte Carlo.
  const double rho = 1.0;
  const double spectral = morawetz_bilinear_term(*grid, g, rho, o.gamma);
  const auto mc = oracle::bilinear_monte_carlo(o.n, o.gamma, [](double s) { return std::exp(-2.0 * s * s); }, rho,
                                               o.samples, o.seed);
  const double bil_err = relative(spectral, mc.value);
  write_file_atomic((fs::path(dir) / "oracle_bilinear.csv").string(),
                    numeric_csv({"rho", "spectral", "monte_carlo", "std_error", "rel_err"},
                                {{rho, spectral, mc.value, mc.std_error, bil_err}}));
  verdict("bilinear vs monte carlo", bil_err <= 5e-2, bil_err, 5e-2);

  out << "wrote oracle tables to " << dir << "\n";
  if (failures > 0) throw InvariantViolation(std::to_string(failures) + " oracle comparison(s) out of tolerance");
  return kOk;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial Hartree equation solver and diagnostics", "hartree"};
  app.require_subcommand(1);
  std::string config_path, output_dir, tiling_path;
  bool pedagogical = false, print = false;
  OracleOptions oracle_opts;

  auto* sim = app.add_subcommand("simulate", "evolve the configured initial data; write diagnostics and checkpoints");
  sim->add_option("-c,--config", config_path, "run configuration")->required();
  sim->add_option("-o,--output", output_dir, "output directory");

  auto* diag = app.add_subcommand("diagnose", "recompute drifts and Morawetz/local-mass reports from checkpoints");
  diag->add_option("-c,--config", config_path, "run configuration")->required();
  diag->add_option("-o,--output", output_dir, "output directory holding the checkpoints");

  auto* inter = app.add_subcommand("intervals", "partition, classify and bubble reports for a simulated run");
  inter->add_option("-c,--config", config_path, "run configuration")->required();
  inter->add_option("-o,--output", output_dir, "output directory");
  inter->add_flag("--pedagogical", pedagogical, "use the small pedagogical C1, C3");

  auto* casc = app.add_subcommand("cascade", "interval cascade and non-evacuation report for a tiling file");
  casc->add_option("-t,--tiling", tiling_path, "tiling file")->required();
  casc->add_option("-c,--config", config_path, "optional run whose checkpoints supply the field at t*");
  casc->add_option("-o,--output", output_dir, "output directory");
  casc->add_flag("--print", print, "echo the report on stdout");

  auto* orc = app.add_subcommand("oracle", "compare the library against the independent reference computations");
  orc->add_option("-o,--output", output_dir, "output directory");
  orc->add_option("--seed", oracle_opts.seed, "Monte Carlo seed");
  orc->add_option("--samples", oracle_opts.samples, "Monte Carlo sample count");
  orc->add_option("--N", oracle_opts.N, "radial grid size");
  orc->add_option("--r-max", oracle_opts.r_max, "radial box size");

  auto* self = app.add_subcommand("selftest", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (sim->parsed()) return simulate(config_path, output_dir, out, err);
    if (diag->parsed()) return diagnose(config_path, output_dir, out);
    if (inter->parsed()) return intervals(config_path, output_dir, pedagogical, out);
    if (casc->parsed()) return cascade(tiling_path, config_path, output_dir, print, out);
    if (orc->parsed()) return run_oracles(oracle_opts, output_dir, out);
    if (self->parsed()) {
      const int failed = run_selftest(out);
      if (failed > 0) throw InvariantViolation(std::to_string(failed) + " invariant(s) failed");
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericFailure& e) {
    err << "error: numeric: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const InvariantViolation& e) {
    err << "error: invariant: " << e.what() << "\n";
    return kInvariantViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace hartree::cli
