#include "hartree/cascade.hpp"

#include "hartree/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace hartree {

namespace {

std::string describe_gap(std::size_t first, std::size_t last, double gap_length, double longest, double a) {
  std::ostringstream msg;
  msg << "cascade hypothesis fails on the gap of intervals " << first << ".." << last << ": longest interval "
      << longest << " is below a * |gap| = " << a * gap_length << " (|gap| = " << gap_length << ")";
  return msg.str();
}

}  // namespace

CascadeHypothesisError::CascadeHypothesisError(std::size_t first, std::size_t last, double gap_length,
                                               double longest, double a)
    : InvariantViolation(describe_gap(first, last, gap_length, longest, a)),
      first_(first),
      last_(last),
      gap_length_(gap_length),
      longest_(longest) {}

double CascadeResult::start_of(std::size_t j) const {
  return t_begin + std::accumulate(lengths.begin(), lengths.begin() + static_cast<std::ptrdiff_t>(j), 0.0);
}

double CascadeResult::length_lower_bound() const {
  return std::log(static_cast<double>(lengths.size())) / std::log(2.0 / a);
}

CascadeResult cascade_generations(std::span<const double> lengths, double a, double t_begin) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("cascade parameter a must lie in (0, 1)");
  if (lengths.empty()) throw DomainError("cascade needs at least one interval");
  for (double len : lengths)
    if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("interval lengths must be positive and finite");

  const std::size_t N = lengths.size();
  CascadeResult result;
  result.a = a;
  result.t_begin = t_begin;
  result.lengths.assign(lengths.begin(), lengths.end());
  result.generations.assign(N, 0);

  struct Segment {
    std::size_t first;
    std::size_t last;  // inclusive
    int generation;
  };
  std::vector<Segment> segments;
  std::vector<Segment> pending{{0, N - 1, 1}};
  while (!pending.empty()) {
    const Segment seg = pending.back();
    pending.pop_back();
    segments.push_back(seg);
    double total = 0.0;
    double longest = 0.0;
    for (std::size_t j = seg.first; j <= seg.last; ++j) {
      total += lengths[j];
      longest = std::max(longest, lengths[j]);
    }
    if (longest < a * total * (1.0 - 1e-12)) throw CascadeHypothesisError(seg.first, seg.last, total, longest, a);
    const double cut = 0.5 * a * total;
    std::size_t j = seg.first;
    while (j <= seg.last) {
      if (lengths[j] > cut) {
        result.generations[j] = seg.generation;
        ++j;
        continue;
      }
      const std::size_t gap_first = j;
      while (j <= seg.last && !(lengths[j] > cut)) ++j;
      pending.push_back({gap_first, j - 1, seg.generation + 1});
    }
  }

  const auto deepest_it = std::max_element(result.generations.begin(), result.generations.end());
  const auto deepest = static_cast<std::size_t>(std::distance(result.generations.begin(), deepest_it));
  const int depth = *deepest_it;
  for (int g = 1; g <= depth; ++g) {
    const auto seg = std::find_if(segments.begin(), segments.end(), [&](const Segment& s) {
      return s.generation == g && s.first <= deepest && deepest <= s.last;
    });
    std::size_t pick = seg->last + 1;
    for (std::size_t j = seg->first; j <= seg->last; ++j)
      if (result.generations[j] == g && (pick > seg->last || lengths[j] > lengths[pick])) pick = j;
    result.chain.push_back(pick);
  }
  const std::size_t last = result.chain.back();
  result.t_star = result.start_of(last) + 0.5 * lengths[last];
  return result;
}

std::optional<std::string> check_cascade_invariants(const CascadeResult& r) {
  std::ostringstream msg;
  for (std::size_t k = 0; k + 1 < r.chain.size(); ++k) {
    const double big = r.lengths[r.chain[k]];
    const double small = r.lengths[r.chain[k + 1]];
    if (big < 2.0 * small) {
      msg << "chain lengths do not halve at position " << k + 1 << ": " << big << " < 2 * " << small;
      return msg.str();
    }
  }
  for (std::size_t k = 0; k < r.chain.size(); ++k) {
    const std::size_t j = r.chain[k];
    const double lo = r.start_of(j);
    const double hi = lo + r.lengths[j];
    const double dist = r.t_star < lo ? lo - r.t_star : (r.t_star > hi ? r.t_star - hi : 0.0);
    if (dist > 2.0 / r.a * r.lengths[j] * (1.0 + 1e-12)) {
      msg << "chain interval " << j << " lies " << dist << " from t* beyond 2/a times its length";
      return msg.str();
    }
  }
  return std::nullopt;
}

namespace {

NonEvacuationReport annulus_bookkeeping(const CascadeResult& cascade, const SixConstants& constants) {
  constants.validate();
  NonEvacuationReport rep;
  rep.K = cascade.K();
  rep.spacing = -56.0 * constants.C1 * std::log(constants.eta);
  rep.stride = static_cast<std::size_t>(std::max(1.0, std::ceil(rep.spacing)));
  for (std::size_t k = 0; k < rep.K; k += rep.stride) {
    AnnulusRecord a;
    a.position = k + 1;
    a.interval = cascade.chain[k];
    const double half_log_len = 0.5 * std::log(cascade.lengths[a.interval]);
    a.log_inner = constants.log_eta_power(constants.C1) + half_log_len;
    a.log_outer = constants.log_eta_power(-27.0 * constants.C1) + half_log_len;
    rep.annuli.push_back(a);
  }
  for (std::size_t i = 0; i + 1 < rep.annuli.size(); ++i) {
    ++rep.disjoint_pairs_checked;
    if (rep.annuli[i + 1].log_outer > rep.annuli[i].log_inner + 1e-12) rep.disjoint = false;
  }
  rep.log10_bound = -100.0 * constants.C1 * std::log10(constants.eta);
  rep.within_bound = std::log10(static_cast<double>(std::max<std::size_t>(rep.K, 1))) <= rep.log10_bound;
  rep.vacuous = std::log10(static_cast<double>(cascade.lengths.size())) <= rep.log10_bound;
  return rep;
}

}  // namespace

NonEvacuationReport nonevacuation_count(const CascadeResult& cascade, const SixConstants& constants) {
  return annulus_bookkeeping(cascade, constants);
}

NonEvacuationReport nonevacuation_count(const Trajectory& traj, const CascadeResult& cascade,
                                        const SixConstants& constants) {
  NonEvacuationReport rep = annulus_bookkeeping(cascade, constants);
  const double slack = 1e-9 * std::max(1.0, std::abs(traj.t_end()));
  if (cascade.t_star < traj.t_begin() - slack || cascade.t_star > traj.t_end() + slack)
    throw DomainError("concentration time lies outside the trajectory");
  const double pos = traj.size() > 1 ? (cascade.t_star - traj.t_begin()) / traj.dt_record() : 0.0;
  const auto idx = std::min(traj.size() - 1, static_cast<std::size_t>(std::max(0.0, std::round(pos))));
  const FieldState& u = traj[idx];
  rep.field_time = u.time();

  const auto& grid = traj.grid();
  const int n = grid.dimension();
  const double p = 2.0 * n / (n - 2.0);
  Eigen::VectorXd powered(grid.size());
  for (Eigen::Index k = 0; k < powered.size(); ++k) powered[k] = std::pow(std::abs(u.values()[k]), p);
  const double big = 4.0 * grid.r_max();
  for (auto& a : rep.annuli) {
    const double inner = std::min(std::exp(a.log_inner), big);
    const double outer = std::min(std::exp(a.log_outer), big);
    a.outside_domain = a.log_outer > std::log(grid.r_max());
    const Eigen::VectorXd shell = ball_weights(grid, outer) - ball_weights(grid, inner);
    a.critical_mass = shell.dot(powered);
  }
  return rep;
}

std::string format_cascade_report(const CascadeResult& cascade, const NonEvacuationReport& rep) {
  std::ostringstream out;
  char buf[256];
  out << "# interval cascade\n";
  std::snprintf(buf, sizeof buf, "a = %.17g\nN = %zu\nK = %zu\n", cascade.a, cascade.lengths.size(), cascade.K());
  out << buf;
  std::snprintf(buf, sizeof buf, "K_lower_bound = %.17g\nt_star = %.17g\n", cascade.length_lower_bound(),
                cascade.t_star);
  out << buf;
  out << "\n# index start length generation\n";
  for (std::size_t j = 0; j < cascade.lengths.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g %d\n", j, cascade.start_of(j), cascade.lengths[j],
                  cascade.generations[j]);
    out << buf;
  }
  out << "\n# chain position interval length\n";
  for (std::size_t k = 0; k < cascade.chain.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", k + 1, cascade.chain[k], cascade.lengths[cascade.chain[k]]);
    out << buf;
  }
  out << "\n# non-evacuation\n";
  std::snprintf(buf, sizeof buf, "spacing_M = %.17g\nstride = %zu\nlog10_K_bound = %.17g\n", rep.spacing, rep.stride,
                rep.log10_bound);
  out << buf;
  out << "within_bound = " << (rep.within_bound ? "true" : "false") << "\n";
  out << "bound_vacuous = " << (rep.vacuous ? "true" : "false") << "\n";
  std::snprintf(buf, sizeof buf, "disjoint_pairs_checked = %zu\n", rep.disjoint_pairs_checked);
  out << buf;
  out << "annuli_disjoint = " << (rep.disjoint ? "true" : "false") << "\n";
  out << "\n# annulus position interval log_inner log_outer critical_mass outside_domain\n";
  for (const auto& a : rep.annuli) {
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g %.17g ", a.position, a.interval, a.log_inner, a.log_outer);
    out << buf;
    if (a.critical_mass) {
      std::snprintf(buf, sizeof buf, "%.17g", *a.critical_mass);
      out << buf;
    } else {
      out << "n/a";
    }
    out << ' ' << (a.outside_domain ? "true" : "false") << "\n";
  }
  return out.str();
}

}  // namespace hartree
