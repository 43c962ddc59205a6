#include "cli/commands.hpp"
#include "hartree/cascade.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hartree;

TEST_CASE("generations of a hand-checked tiling") {
  const std::vector<double> lengths{4, 1, 0.5, 0.5, 2};
  const auto r = cascade_generations(lengths, 0.5);
  CHECK(r.generations == std::vector<int>{1, 3, 4, 4, 2});
  CHECK(r.chain == std::vector<std::size_t>{0, 4, 1, 2});
  CHECK(r.t_star == doctest::Approx(5.25));
  CHECK_FALSE(check_cascade_invariants(r).has_value());
  CHECK(static_cast<double>(r.K()) >= r.length_lower_bound());
}

TEST_CASE("a gap without a long interval violates the hypothesis") {
  const std::vector<double> lengths{1, 1, 1, 1};
  CHECK_THROWS_AS(cascade_generations(lengths, 0.5), CascadeHypothesisError);
  try {
    cascade_generations(lengths, 0.5);
  } catch (const CascadeHypothesisError& e) {
    CHECK(e.first() == 0);
    CHECK(e.last() == 3);
    CHECK(e.gap_length() == doctest::Approx(4.0));
  }
  CHECK_THROWS_AS(cascade_generations(lengths, 1.5), DomainError);
}

TEST_CASE("generations agree with the reference on every small dyadic tiling") {
  for (double a : {0.3, 0.5}) {
    for (const auto& lengths : oracle::dyadic_tilings(6)) {
      const auto ref = oracle::reference_cascade(lengths, a);
      if (!ref.hypothesis_holds) {
        CHECK_THROWS_AS(cascade_generations(lengths, a), CascadeHypothesisError);
        continue;
      }
      const auto got = cascade_generations(lengths, a);
      CHECK(got.generations == ref.generations);
      CHECK(got.chain == ref.chain);
      CHECK(got.t_star == ref.t_star);
    }
  }
}

TEST_CASE("annulus bookkeeping in log space") {
  const std::vector<double> lengths{4, 1, 0.5, 0.5, 2};
  const auto r = cascade_generations(lengths, 0.5);
  SixConstants c;
  c.C1 = 1;
  const auto rep = nonevacuation_count(r, c);
  CHECK(rep.spacing == doctest::Approx(-56.0 * std::log(0.3)));
  CHECK(rep.stride == 68);
  CHECK(rep.annuli.size() == 1);
  CHECK(rep.annuli[0].log_outer - rep.annuli[0].log_inner == doctest::Approx(-28.0 * std::log(0.3)));
  CHECK(rep.vacuous);
  CHECK(rep.within_bound);
  CHECK_FALSE(rep.annuli[0].critical_mass.has_value());
}

TEST_CASE("cascade subcommand reproduces the golden report") {
  const std::string data = HARTREE_TEST_DATA_DIR;
  const auto dir = std::filesystem::temp_directory_path() / "hartree_golden_test";
  std::filesystem::remove_all(dir);
  const std::string out_dir = dir.string();
  const std::string tiling = data + "/synthetic_tiling.txt";
  const char* argv[] = {"hartree", "cascade", "-t", tiling.c_str(), "-o", out_dir.c_str()};
  std::ostringstream out, err;
  REQUIRE(cli::run_command(6, argv, out, err) == 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  CHECK(slurp(dir / "cascade_report.txt") == slurp(data + "/synthetic_tiling.golden"));
  std::filesystem::remove_all(dir);
}
