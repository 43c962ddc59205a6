#include "cli/commands.hpp"
#include "hartree/config.hpp"
#include "hartree/errors.hpp"
#include "hartree/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hartree;
namespace fs = std::filesystem;

namespace {

const char* kMinimal =
    "model.n = 5\nmodel.gamma = 4\ngrid.N = 256\ngrid.r_max = 20\ntime.dt = 1e-3\ntime.t_end = 1\n";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hartree_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::vector<const char*> argv{"hartree"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.model.n == 5);
  CHECK(c.N == 256);
  CHECK(c.record_every == 1);
  CHECK(c.initial.profile == "gaussian");
  CHECK(c.constants.C1 == 30);
  CHECK(c.constants.C3 == 90);
  CHECK(c.pedagogical.C1 == 2);
  CHECK(c.radii == std::vector<double>{1.0, 2.0, 5.0});
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line(std::string(kMinimal) + "model.gamma = 6\n") == 7);
  CHECK(error_line("model.n = 5\nmodel.gamma = 6\ngrid.N = 256\ngrid.r_max = 20\ntime.dt = 1e-3\ntime.t_end = 1\n") ==
        2);
  CHECK(error_line(std::string(kMinimal) + "# comment\ngrid.typo = 3\n") == 8);
  CHECK(error_line("model.n = 5\ngrid.N = 256\n") == 3);
  CHECK(error_line(std::string(kMinimal) + "grid.N = abc\n") == 7);
  CHECK(error_line(std::string(kMinimal) + "time.record_every = 3\n") == 7);
  try {
    parse_config("model.n = 5\nmodel.gamma = 6\ngrid.N = 256\ngrid.r_max = 20\ntime.dt = 1e-3\ntime.t_end = 1\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("0 < gamma < n") != std::string::npos);
  }
}

TEST_CASE("emitted config parses back to the same value") {
  RunConfig c = parse_config(std::string(kMinimal) +
                             "diagnostics.radii = 0.5, 3\ninitial.profile = bump\ninitial.width = 1.5\n"
                             "constants.C1 = 7\nseed = 42\noutput.dir = \"some dir\"\n");
  CHECK(parse_config(emit_config(c)) == c);
  c.dt = 0.1 + 0.2;
  c.t_end = 3 * c.dt;
  CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("initial profiles") {
  const auto g = build_radial_grid(5, 64, 4.0);
  RunConfig c = parse_config(std::string(kMinimal) + "initial.profile = bump\ninitial.amplitude = 2\n");
  const auto bump = make_initial_state(c, g);
  CHECK(bump.values()[0].real() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(bump.values()[g->size() - 1] == Complex(0.0, 0.0));

  const auto dir = scratch("table");
  std::ofstream(dir / "profile.txt") << "# r re im\n0 1 0\n1 0.5 0.5\n2 0 0\n";
  c = parse_config(std::string(kMinimal) + "initial.profile = table\ninitial.table = " +
                   (dir / "profile.txt").string() + "\n");
  const auto table = make_initial_state(c, g);
  const double r = g->nodes()[8];
  CHECK(table.values()[8].real() == doctest::Approx(1.0 - 0.5 * r));
  CHECK(table.values()[8].imag() == doctest::Approx(0.5 * r));
  fs::remove_all(dir);
}

TEST_CASE("checkpoint round trip is bit identical") {
  const auto dir = scratch("checkpoint");
  const auto g = build_radial_grid(5, 64, 10.0);
  const auto u =
      free_propagate(*g, FieldState::from_profile(g, [](double r) { return Complex(std::exp(-r * r), 0.0); }), 0.3)
          .at_time(0.3);
  const auto path = (dir / "u.hrtl").string();
  write_checkpoint(path, u);
  CHECK(fs::file_size(path) == 4 + 4 + 32 + 16 * 64);
  const auto back = read_checkpoint(path, g);
  CHECK(back.values() == u.values());
  CHECK(back.time() == u.time());
  const auto fresh = read_checkpoint(path);
  CHECK(fresh.grid().spec() == g->spec());
  CHECK(read_checkpoint_header(path).N == 64);

  SUBCASE("cross-resolution read is refused") {
    CHECK_THROWS_AS(read_checkpoint(path, build_radial_grid(5, 128, 10.0)), GridMismatch);
  }
  SUBCASE("truncated file is refused") {
    fs::resize_file(path, fs::file_size(path) - 8);
    CHECK_THROWS_AS(read_checkpoint(path, g), FormatError);
  }
  SUBCASE("bad magic and version are refused") {
    std::string bytes = slurp(path);
    bytes[0] = 'X';
    std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
    CHECK_THROWS_AS(read_checkpoint(path, g), FormatError);
    bytes[0] = 'H';
    bytes[4] = 9;
    std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
    CHECK_THROWS_AS(read_checkpoint(path, g), FormatError);
  }
  fs::remove_all(dir);
}

TEST_CASE("diagnostics CSV uses 17 significant digits and a fixed header") {
  const auto header = diagnostics_header({1.0, 2.5});
  CHECK(header.size() == 12);
  CHECK(header[8] == "local_mass_R1");
  CHECK(header[9] == "local_mass_R2.5");
  CHECK(format_scientific(0.1) == "1.0000000000000001e-01");
  DiagnosticsRecord r;
  r.local_masses = {1.0, 2.0};
  const std::string csv = diagnostics_csv({1.0, 2.5}, {r});
  CHECK(csv.substr(0, csv.find('\n')) ==
        "t,mass,kinetic,potential,energy,sup_abs,sobolev_norm,h1dot,local_mass_R1,local_mass_R2.5,"
        "boundary_fraction,morawetz_action");
  r.mass = std::nan("");
  CHECK_THROWS_AS(diagnostics_csv({1.0, 2.5}, {r}), NumericFailure);
}

TEST_CASE("simulate and diagnose are deterministic and agree") {
  const auto dir = scratch("simulate");
  std::ofstream(dir / "run.cfg") << "model.n = 5\nmodel.gamma = 4\ngrid.N = 64\ngrid.r_max = 15\n"
                                    "time.dt = 1e-3\ntime.t_end = 0.04\ntime.record_every = 2\n";
  const auto cfg = (dir / "run.cfg").string();
  REQUIRE(run({"simulate", "-c", cfg, "-o", (dir / "a").string()}) == 0);
  REQUIRE(run({"simulate", "-c", cfg, "-o", (dir / "b").string()}) == 0);
  CHECK(slurp(dir / "a" / "diagnostics.csv") == slurp(dir / "b" / "diagnostics.csv"));
  CHECK(fs::exists(dir / "a" / "checkpoints" / "state_0000000000.hrtl"));
  CHECK(fs::exists(dir / "a" / "checkpoints" / "state_0000000020.hrtl"));
  CHECK(fs::exists(dir / "a" / "checkpoints" / "state_0000000040.hrtl"));
  CHECK(parse_config(slurp(dir / "a" / "effective_config.txt")) == load_config(cfg));
  REQUIRE(run({"diagnose", "-c", cfg, "-o", (dir / "a").string()}) == 0);
  const std::string drift = slurp(dir / "a" / "drift.csv");
  CHECK(drift.substr(0, drift.find('\n')) == "t,mass,energy,mass_drift,energy_drift");
  CHECK(fs::exists(dir / "a" / "diagnostics_report.txt"));
  fs::remove_all(dir);
}

TEST_CASE("exit codes distinguish the failure kinds") {
  const auto dir = scratch("exit");
  std::ofstream(dir / "bad.cfg") << "model.n = 5\nmodel.gamma = 6\ngrid.N = 64\ngrid.r_max = 10\n"
                                    "time.dt = 1e-3\ntime.t_end = 1\n";
  std::string err;
  CHECK(run({"simulate", "-c", (dir / "bad.cfg").string(), "-o", dir.string()}, nullptr, &err) == 2);
  CHECK(err.find("line 2") != std::string::npos);
  CHECK(run({"frobnicate"}) == 2);
  std::ofstream(dir / "flat.txt") << "a = 0.5\n1\n1\n1\n1\n";
  CHECK(run({"cascade", "-t", (dir / "flat.txt").string(), "-o", dir.string()}) == 4);
  std::ofstream(dir / "edge.cfg") << "model.n = 5\nmodel.gamma = 4\ngrid.N = 64\ngrid.r_max = 4\n"
                                     "time.dt = 1e-2\ntime.t_end = 1\ntime.record_every = 10\n"
                                     "diagnostics.strict_boundary = true\n";
  CHECK(run({"simulate", "-c", (dir / "edge.cfg").string(), "-o", dir.string()}) == 4);
  fs::remove_all(dir);
}

TEST_CASE("output directory override order") {
  CHECK(cli::resolve_output_dir("flag", "config") == "flag");
  ::setenv("HARTREE_OUTPUT_DIR", "from_env", 1);
  CHECK(cli::resolve_output_dir("", "config") == "from_env");
  ::unsetenv("HARTREE_OUTPUT_DIR");
  CHECK(cli::resolve_output_dir("", "config") == "config");
}

TEST_CASE("tiling file parsing") {
  const auto t = cli::parse_tiling("# demo\na = 0.25\nC1 = 3\nstart = 2\n1\n0.5\n");
  CHECK(t.a == 0.25);
  CHECK(t.constants.C1 == 3);
  CHECK(t.start == 2.0);
  CHECK(t.lengths == std::vector<double>{1.0, 0.5});
  CHECK_THROWS_AS(cli::parse_tiling("a = 2\n1\n"), ConfigError);
  CHECK_THROWS_AS(cli::parse_tiling("1\n-1\n"), ConfigError);
  CHECK_THROWS_AS(cli::parse_tiling("b = 1\n1\n"), ConfigError);
}

TEST_CASE("selftest passes") {
  std::string out;
  CHECK(run({"selftest"}, &out) == 0);
  CHECK(out.find("FAIL") == std::string::npos);
}
