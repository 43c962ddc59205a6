#pragma once

#include "hartree/evolution.hpp"
#include "hartree/sampled_series.hpp"

#include <cmath>
#include <vector>

namespace hartree {

/// Constants of the interval argument. Powers of eta are taken in log space
/// where they would overflow.
struct SixConstants {
  int C1 = 30;
  int C2 = 3;
  int C3 = 90;
  double eta = 0.3;

  static SixConstants defaults(int n);
  void validate() const;
  /// log(eta^p)
  double log_eta_power(double p) const { return p * std::log(eta); }
};

/// Spatial exponent of the X norm, 6n / (3n - 8).
double x_space_exponent(int n);
/// Spatial exponent of the W norm, 6n / (3n - 4).
double w_space_exponent(int n);

/// t -> ||u(t)||^6 in L^{6n/(3n-8)} on the trajectory samples.
SampledSeries x_norm_density(const Trajectory& traj);
/// t -> ||d_r u(t)||^3 in L^{6n/(3n-4)} on the trajectory samples.
SampledSeries w_norm_density(const Trajectory& traj);

/// L^6_t L^{6n/(3n-8)}_x over [a, b].
double x_norm(const Trajectory& traj, double a, double b);
/// L^3_t L^{6n/(3n-4)}_x of the gradient over [a, b].
double w_norm(const Trajectory& traj, double a, double b);

/// Size of the Duhamel increment u(t) - U(t - a) u(a) on [a, b] against
/// ||u||_X^2 ||u||_W. The increment is measured by the largest of its four
/// Sobolev-Strichartz norms: grad in L^inf L^2 and L^3 L^{6n/(3n-4)}, the
/// field in L^inf L^{2n/(n-2)} and L^6 L^{6n/(3n-8)}.
struct DuhamelEstimate {
  double increment = 0.0;
  double x_norm = 0.0;
  double w_norm = 0.0;
  double ratio = 0.0;
};

DuhamelEstimate duhamel_ratio(const Trajectory& traj, double a, double b);

enum class IntervalLabel { unclassified, exceptional, unexceptional };

const char* to_string(IntervalLabel label) noexcept;

struct TimeInterval {
  double begin = 0.0;
  double end = 0.0;
  double x_norm = 0.0;
  /// Final partial interval, exempt from the eta/2 <= X <= eta window.
  bool tail = false;
  IntervalLabel label = IntervalLabel::unclassified;
  /// X norms of the free evolutions from the two trajectory endpoints.
  double free_x_norm_minus = 0.0;
  double free_x_norm_plus = 0.0;

  double length() const noexcept { return end - begin; }
};

struct IntervalTiling {
  double eta = 0.0;
  double total_x_norm = 0.0;
  std::vector<TimeInterval> intervals;
  /// Largest amount by which a non-tail interval exceeds eta.
  double max_overshoot = 0.0;

  std::size_t count(IntervalLabel label) const;
};

/// Greedy left-to-right partition so that every interval but a possible
/// tail has X norm eta. When the total is below 2 eta the whole range is a
/// single tail interval.
IntervalTiling partition_by_x_norm(const SampledSeries& x_density, double eta);
IntervalTiling partition_by_x_norm(const Trajectory& traj, double eta);

/// Labels each interval exceptional when a free evolution from either
/// trajectory endpoint has X norm above eta^C3 on it.
IntervalTiling classify_exceptional(IntervalTiling tiling, const Trajectory& traj, const SixConstants& constants);

struct BubbleRecord {
  std::size_t interval = 0;
  double log_radius = 0.0;  ///< log of eta^{-3 C1} |I|^{1/2}
  double radius = 0.0;      ///< may be +inf
  /// Local mass at the bubble radius, minimised over the samples covering I.
  double min_local_mass = 0.0;
  double log_threshold = 0.0;  ///< log of eta^{C1} |I|
  double ratio = 0.0;          ///< min_local_mass / threshold, may be +inf
  bool unresolved = false;     ///< radius beyond r_max
};

struct BubbleReport {
  std::vector<BubbleRecord> records;
  /// No unexceptional interval carries any mass.
  bool vacuous = true;
};

BubbleReport bubble_report(const Trajectory& traj, const IntervalTiling& tiling, const SixConstants& constants);

/// Runs of consecutive unexceptional intervals compared against the
/// Morawetz-driven count bound eta^{-13 C1} |I|^{1/2}.
struct ControlRecord {
  std::size_t first = 0;
  std::size_t last = 0;
  double length = 0.0;
  double sum_sqrt_lengths = 0.0;
  double log_bound = 0.0;         ///< log of eta^{-13 C1} |I|^{1/2}
  double ratio = 0.0;             ///< sum / bound
  double longest_fraction = 0.0;  ///< max |I_j| / |I|
  double log_min_fraction = 0.0;  ///< log of eta^{26 C1}
};

std::vector<ControlRecord> interval_control_report(const IntervalTiling& tiling, const SixConstants& constants);

}  // namespace hartree
