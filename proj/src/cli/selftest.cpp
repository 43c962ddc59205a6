#include "cli/commands.hpp"

#include "hartree/diagnostics.hpp"
#include "hartree/io.hpp"
#include "oracles/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <unistd.h>

namespace hartree::cli {

namespace {

struct Check {
  const char* name;
  std::function<std::pair<bool, std::string>()> run;
};

std::string fmt(const char* pattern, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

}  // namespace

int run_selftest(std::ostream& out) {
  const GridPtr grid = build_radial_grid(5, 256, 20.0);
  const FieldState gauss =
      FieldState::from_profile(grid, [](double r) { return Complex(std::exp(-r * r), 0.0); });
  const ModelParams params{5, 4.0, 1.0};

  const std::vector<Check> checks{
      {"hankel round trip",
       [&] {
         const auto back = hankel_inverse(*grid, hankel_forward(*grid, gauss));
         const double e = (back.values() - gauss.values()).cwiseAbs().maxCoeff();
         return std::pair{e <= 1e-10, fmt("max error %.2e", e)};
       }},
      {"plancherel",
       [&] {
         const auto spec = hankel_forward(*grid, gauss);
         const double s = spec.values.cwiseAbs2().dot(grid->xi_weights());
         const double e = std::abs(s - mass(*grid, gauss)) / mass(*grid, gauss);
         return std::pair{e <= 1e-10, fmt("relative error %.2e", e)};
       }},
      {"riesz potential vs quadrature",
       [&] {
         const Eigen::VectorXd v = riesz_convolve(*grid, gauss.density(), 4.0);
         double worst = 0.0;
         for (Eigen::Index k : {Eigen::Index{10}, Eigen::Index{40}, Eigen::Index{90}}) {
           const double q = oracle::riesz_quadrature(
               5, 4.0, [](double s) { return std::exp(-2.0 * s * s); }, 10.0, grid->nodes()[k]);
           worst = std::max(worst, std::abs(v[k] - q) / q);
         }
         return std::pair{worst <= 1e-4, fmt("max relative error %.2e", worst)};
       }},
      {"free gaussian closed form",
       [&] {
         const auto moved = free_propagate(*grid, gauss, 0.5);
         double e = 0.0;
         for (Eigen::Index k = 0; k < grid->size(); ++k)
           e = std::max(e, std::abs(moved.values()[k] - oracle::free_gaussian(5, 0.5, grid->nodes()[k])));
         return std::pair{e <= 1e-8, fmt("max error %.2e", e)};
       }},
      {"strang step conserves mass",
       [&] {
         const auto traj = evolve(*grid, gauss, params, 0.05, 1e-3, 50);
         const double e = std::abs(mass(*grid, traj[1]) - mass(*grid, traj[0])) / mass(*grid, traj[0]);
         return std::pair{e <= 1e-12, fmt("relative drift %.2e", e)};
       }},
      {"bilinear pair weights nonnegative",
       [&] {
         const Eigen::MatrixXd K = bilinear_pair_weights(*grid, 1.0, 4.0);
         const double lo = K.minCoeff();
         return std::pair{lo >= 0.0, fmt("min weight %.2e", lo)};
       }},
      {"checkpoint round trip",
       [&] {
         const auto path = (std::filesystem::temp_directory_path() /
                            ("hartree_selftest_" + std::to_string(::getpid()) + ".hrtl"))
                               .string();
         const FieldState u = free_propagate(*grid, gauss, 0.25).at_time(0.25);
         write_checkpoint(path, u);
         const FieldState back = read_checkpoint(path, grid);
         std::filesystem::remove(path);
         const bool same = back.values() == u.values() && back.time() == u.time();
         return std::pair{same, std::string(same ? "bit identical" : "values differ")};
       }},
      {"config round trip",
       [&] {
         const RunConfig c = parse_config("model.n = 5\nmodel.gamma = 4\ngrid.N = 256\ngrid.r_max = 20\n"
                                          "time.dt = 1e-3\ntime.t_end = 1\n");
         const bool same = parse_config(emit_config(c)) == c;
         return std::pair{same, std::string(same ? "structurally equal" : "differs")};
       }},
      {"cascade vs reference",
       [&] {
         std::size_t bad = 0, total = 0;
         for (const auto& lengths : oracle::dyadic_tilings(6)) {
           const auto ref = oracle::reference_cascade(lengths, 0.5);
           ++total;
           try {
             const auto got = cascade_generations(lengths, 0.5);
             if (!ref.hypothesis_holds || got.generations != ref.generations || got.chain != ref.chain) ++bad;
           } catch (const CascadeHypothesisError&) {
             if (ref.hypothesis_holds) ++bad;
           }
         }
         return std::pair{bad == 0, std::to_string(bad) + " mismatches in " + std::to_string(total) + " tilings"};
       }},
      {"partition window",
       [&] {
         std::vector<double> v;
         for (int i = 0; i <= 400; ++i) v.push_back(1.0 + std::sin(0.05 * i) * std::sin(0.05 * i));
         const SampledSeries series(0.0, 0.01, v);
         const auto tiling = partition_by_x_norm(series, 0.6);
         bool ok = true;
         double sum = 0.0;
         for (const auto& i : tiling.intervals) {
           sum += std::pow(i.x_norm, 6.0);
           if (!i.tail && (i.x_norm < 0.3 || i.x_norm > 0.6 * (1.0 + 1e-12))) ok = false;
         }
         const double additivity = std::abs(sum - series.integral(0.0, 4.0)) / series.integral(0.0, 4.0);
         return std::pair{ok && additivity <= 1e-9, fmt("additivity error %.2e", additivity)};
       }},
  };

  int failed = 0;
  for (const auto& c : checks) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = c.run();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %-34s %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.name, detail.c_str(), secs);
    out << buf;
    if (!ok) ++failed;
  }
  return failed;
}

}  // namespace hartree::cli
