#include "oracles/oracles.hpp"

#include <algorithm>
#include <functional>

namespace hartree::oracle {

namespace {

struct Run {
  std::size_t first;
  std::size_t last;
};

// Maximal runs of indices whose label satisfies `member`.
std::vector<Run> runs(const std::vector<int>& labels, const std::function<bool(int)>& member) {
  std::vector<Run> out;
  std::size_t j = 0;
  while (j < labels.size()) {
    if (!member(labels[j])) {
      ++j;
      continue;
    }
    const std::size_t first = j;
    while (j < labels.size() && member(labels[j])) ++j;
    out.push_back({first, j - 1});
  }
  return out;
}

}  // namespace

ReferenceCascade reference_cascade(const std::vector<double>& lengths, double a, double t_begin) {
  ReferenceCascade ref;
  const std::size_t N = lengths.size();
  ref.generations.assign(N, 0);
  for (int level = 1;; ++level) {
    const auto open = runs(ref.generations, [](int g) { return g == 0; });
    if (open.empty()) break;
    for (const auto& seg : open) {
      double total = 0.0, longest = 0.0;
      for (std::size_t j = seg.first; j <= seg.last; ++j) {
        total += lengths[j];
        longest = std::max(longest, lengths[j]);
      }
      if (longest < a * total * (1.0 - 1e-12)) {
        ref.hypothesis_holds = false;
        return ref;
      }
      for (std::size_t j = seg.first; j <= seg.last; ++j)
        if (lengths[j] > 0.5 * a * total) ref.generations[j] = level;
    }
  }

  const int depth = *std::max_element(ref.generations.begin(), ref.generations.end());
  std::size_t deepest = 0;
  while (ref.generations[deepest] != depth) ++deepest;
  for (int g = 1; g <= depth; ++g) {
    for (const auto& seg : runs(ref.generations, [g](int x) { return x >= g; })) {
      if (deepest < seg.first || deepest > seg.last) continue;
      std::size_t pick = N;
      for (std::size_t j = seg.first; j <= seg.last; ++j)
        if (ref.generations[j] == g && (pick == N || lengths[j] > lengths[pick])) pick = j;
      ref.chain.push_back(pick);
    }
  }
  const std::size_t last = ref.chain.back();
  double start = t_begin;
  for (std::size_t j = 0; j < last; ++j) start += lengths[j];
  ref.t_star = start + 0.5 * lengths[last];
  return ref;
}

std::vector<std::vector<double>> dyadic_tilings(int max_intervals) {
  // Tilings of an interval of the given length with at most `budget` pieces.
  std::function<std::vector<std::vector<double>>(double, int)> tile = [&](double length, int budget) {
    std::vector<std::vector<double>> out{{length}};
    for (int left = 1; left < budget; ++left)
      for (const auto& l : tile(0.5 * length, left)) {
        if (static_cast<int>(l.size()) != left) continue;
        for (const auto& r : tile(0.5 * length, budget - left)) {
          auto joined = l;
          joined.insert(joined.end(), r.begin(), r.end());
          out.push_back(std::move(joined));
        }
      }
    return out;
  };
  return tile(1.0, max_intervals);
}

}  // namespace hartree::oracle
