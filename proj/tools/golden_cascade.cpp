// Writes the cascade report for a tiling file using the brute-force
// reference recursion in place of the library's. The output is the golden
// file the cascade subcommand is compared against.

#include "cli/commands.hpp"
#include "oracles/oracles.hpp"

#include <iostream>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: hartree_golden <tiling file>\n";
    return 2;
  }
  const auto tiling = hartree::cli::load_tiling(argv[1]);
  const auto ref = hartree::oracle::reference_cascade(tiling.lengths, tiling.a, tiling.start);
  if (!ref.hypothesis_holds) {
    std::cerr << "tiling violates the cascade hypothesis\n";
    return 4;
  }
  hartree::CascadeResult result;
  result.a = tiling.a;
  result.t_begin = tiling.start;
  result.lengths = tiling.lengths;
  result.generations = ref.generations;
  result.chain = ref.chain;
  result.t_star = ref.t_star;
  std::cout << hartree::format_cascade_report(result, hartree::nonevacuation_count(result, tiling.constants));
  return 0;
}
