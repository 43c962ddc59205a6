#pragma once

#include "hartree/errors.hpp"
#include "hartree/interval_machinery.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hartree {

/// A gap whose longest interval is shorter than a times the gap length.
class CascadeHypothesisError : public InvariantViolation {
 public:
  CascadeHypothesisError(std::size_t first, std::size_t last, double gap_length, double longest, double a);

  std::size_t first() const noexcept { return first_; }
  std::size_t last() const noexcept { return last_; }
  double gap_length() const noexcept { return gap_length_; }
  double longest() const noexcept { return longest_; }

 private:
  std::size_t first_;
  std::size_t last_;
  double gap_length_;
  double longest_;
};

struct CascadeResult {
  double a = 0.0;
  double t_begin = 0.0;
  std::vector<double> lengths;
  std::vector<int> generations;     ///< 1-based, per interval
  std::vector<std::size_t> chain;   ///< interval indices j_1 ... j_K
  double t_star = 0.0;              ///< midpoint of the last chain interval

  std::size_t K() const noexcept { return chain.size(); }
  double start_of(std::size_t j) const;
  /// log N / log(2 / a)
  double length_lower_bound() const;
};

/// Generation labelling: in each segment the intervals longer than a/2 of
/// the segment form the next generation and the gaps between them are
/// processed recursively. The chain descends through the gaps that hold the
/// leftmost deepest interval, taking the longest interval of each generation
/// (ties to the left).
CascadeResult cascade_generations(std::span<const double> lengths, double a, double t_begin = 0.0);

/// Dyadic decay and distance bound of the chain; returns a description of
/// the first violation, or nullopt.
std::optional<std::string> check_cascade_invariants(const CascadeResult& result);

struct AnnulusRecord {
  std::size_t position = 0;  ///< 1-based position in the chain
  std::size_t interval = 0;
  double log_inner = 0.0;    ///< log of eta^{C1} |I|^{1/2}
  double log_outer = 0.0;    ///< log of eta^{-27 C1} |I|^{1/2}
  /// int over the annulus of |u(t*)|^{2n/(n-2)}; empty without a field.
  std::optional<double> critical_mass;
  bool outside_domain = false;  ///< outer radius beyond r_max
};

struct NonEvacuationReport {
  double spacing = 0.0;  ///< -56 C1 log(eta)
  std::size_t stride = 0;
  std::vector<AnnulusRecord> annuli;
  std::size_t disjoint_pairs_checked = 0;
  bool disjoint = true;
  std::size_t K = 0;
  double log10_bound = 0.0;  ///< log10 of eta^{-100 C1}
  bool within_bound = true;
  /// The bound exceeds the number of intervals, so it cannot bind.
  bool vacuous = false;
  double field_time = 0.0;
};

/// Annulus bookkeeping from the chain lengths alone.
NonEvacuationReport nonevacuation_count(const CascadeResult& cascade, const SixConstants& constants);
/// As above with annulus masses of the trajectory sample nearest t*.
NonEvacuationReport nonevacuation_count(const Trajectory& traj, const CascadeResult& cascade,
                                        const SixConstants& constants);

/// Plain-text report shared by the CLI and the golden-file tests.
std::string format_cascade_report(const CascadeResult& cascade, const NonEvacuationReport& report);

}  // namespace hartree
