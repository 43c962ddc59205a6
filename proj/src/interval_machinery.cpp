#include "hartree/interval_machinery.hpp"

#include "hartree/diagnostics.hpp"
#include "hartree/errors.hpp"
#include "hartree/nonlinearity.hpp"

#include <algorithm>
#include <limits>

namespace hartree {

SixConstants SixConstants::defaults(int n) {
  SixConstants c;
  c.C1 = 6 * n;
  c.C2 = 3;
  c.C3 = 18 * n;
  c.eta = 0.3;
  return c;
}

void SixConstants::validate() const {
  if (C1 <= 0 || C2 <= 0 || C3 <= 0) throw DomainError("C1, C2 and C3 must be positive integers");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
}

double x_space_exponent(int n) { return 6.0 * n / (3.0 * n - 8.0); }
double w_space_exponent(int n) { return 6.0 * n / (3.0 * n - 4.0); }

namespace {

SampledSeries series_of(const Trajectory& traj, const std::vector<double>& values) {
  return SampledSeries(traj.t_begin(), traj.size() > 1 ? traj.dt_record() : 1.0, values);
}

double x_density_of(const RadialGrid& grid, const FieldState& u) {
  return std::pow(lp_norm(grid, u, x_space_exponent(grid.dimension())), 6.0);
}

double w_density_of(const RadialGrid& grid, const FieldState& u) {
  const FieldState du = u.with_values(radial_derivative(grid, u));
  return std::pow(lp_norm(grid, du, w_space_exponent(grid.dimension())), 3.0);
}

// Free evolution of one state evaluated at every trajectory sample.
class FreeFlow {
 public:
  FreeFlow(const RadialGrid& grid, const FieldState& origin)
      : grid_(grid), origin_(origin), spectral_(grid.forward_matrix() * origin.values()) {}

  FieldState at(double t) const {
    const auto& xi = grid_.xi_nodes();
    const double s = t - origin_.time();
    Eigen::VectorXcd phased(xi.size());
    for (Eigen::Index m = 0; m < xi.size(); ++m) phased[m] = spectral_[m] * std::polar(1.0, -xi[m] * xi[m] * s);
    return FieldState(origin_.grid_ptr(), grid_.inverse_matrix() * phased, t);
  }

 private:
  const RadialGrid& grid_;
  const FieldState& origin_;
  Eigen::VectorXcd spectral_;
};

}  // namespace

SampledSeries x_norm_density(const Trajectory& traj) {
  std::vector<double> v;
  v.reserve(traj.size());
  for (const auto& u : traj.states()) v.push_back(x_density_of(traj.grid(), u));
  return series_of(traj, v);
}

SampledSeries w_norm_density(const Trajectory& traj) {
  std::vector<double> v;
  v.reserve(traj.size());
  for (const auto& u : traj.states()) v.push_back(w_density_of(traj.grid(), u));
  return series_of(traj, v);
}

double x_norm(const Trajectory& traj, double a, double b) {
  traj.require_within(a, b);
  return std::pow(x_norm_density(traj).integral(a, b), 1.0 / 6.0);
}

double w_norm(const Trajectory& traj, double a, double b) {
  traj.require_within(a, b);
  return std::cbrt(w_norm_density(traj).integral(a, b));
}

DuhamelEstimate duhamel_ratio(const Trajectory& traj, double a, double b) {
  traj.require_within(a, b);
  const auto i1 = traj.index_of(a);
  const auto i2 = traj.index_of(b);
  const auto& grid = traj.grid();
  const int n = grid.dimension();
  const FreeFlow free(grid, traj[i1]);

  std::vector<double> xv, wv, xu, wu;
  double sup_grad = 0.0;
  double sup_sobolev = 0.0;
  for (std::size_t i = i1; i <= i2; ++i) {
    const FieldState& u = traj[i];
    const FieldState inc = u.with_values(u.values() - free.at(u.time()).values());
    sup_grad = std::max(sup_grad, h1dot_norm(grid, inc));
    sup_sobolev = std::max(sup_sobolev, lp_norm(grid, inc, 2.0 * n / (n - 2.0)));
    xv.push_back(x_density_of(grid, inc));
    wv.push_back(w_density_of(grid, inc));
    xu.push_back(x_density_of(grid, u));
    wu.push_back(w_density_of(grid, u));
  }
  const double t0 = traj[i1].time();
  const double dt = traj.size() > 1 ? traj.dt_record() : 1.0;
  auto norm = [&](const std::vector<double>& v, double power) {
    return std::pow(SampledSeries(t0, dt, v).integral(a, b), 1.0 / power);
  };
  DuhamelEstimate est;
  est.increment = std::max({sup_grad, sup_sobolev, norm(xv, 6.0), norm(wv, 3.0)});
  est.x_norm = norm(xu, 6.0);
  est.w_norm = norm(wu, 3.0);
  const double scale = est.x_norm * est.x_norm * est.w_norm;
  est.ratio = scale > 0.0 ? est.increment / scale : 0.0;
  return est;
}

const char* to_string(IntervalLabel label) noexcept {
  switch (label) {
    case IntervalLabel::unclassified: return "unclassified";
    case IntervalLabel::exceptional: return "exceptional";
    case IntervalLabel::unexceptional: return "unexceptional";
  }
  return "unknown";
}

std::size_t IntervalTiling::count(IntervalLabel label) const {
  return static_cast<std::size_t>(
      std::count_if(intervals.begin(), intervals.end(), [&](const TimeInterval& i) { return i.label == label; }));
}

IntervalTiling partition_by_x_norm(const SampledSeries& x_density, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("eta must be positive");
  IntervalTiling tiling;
  tiling.eta = eta;
  const double begin = x_density.t_begin();
  const double end = x_density.t_end();
  tiling.total_x_norm = std::pow(x_density.integral(begin, end), 1.0 / 6.0);

  if (tiling.total_x_norm < 2.0 * eta) {
    tiling.intervals.push_back({begin, end, tiling.total_x_norm, true});
    return tiling;
  }
  const double target = std::pow(eta, 6.0);
  double a = begin;
  while (a < end) {
    const auto b = x_density.solve_for(a, target);
    if (!b) {
      const double rest = x_density.integral(a, end);
      if (rest > 0.0) tiling.intervals.push_back({a, end, std::pow(rest, 1.0 / 6.0), true});
      break;
    }
    if (!(*b > a)) throw NumericFailure("partition made no progress; X-norm density is degenerate");
    TimeInterval interval{a, *b, std::pow(x_density.integral(a, *b), 1.0 / 6.0)};
    tiling.max_overshoot = std::max(tiling.max_overshoot, interval.x_norm - eta);
    tiling.intervals.push_back(interval);
    a = *b;
  }
  return tiling;
}

IntervalTiling partition_by_x_norm(const Trajectory& traj, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("eta must be positive");
  return partition_by_x_norm(x_norm_density(traj), eta);
}

IntervalTiling classify_exceptional(IntervalTiling tiling, const Trajectory& traj, const SixConstants& constants) {
  constants.validate();
  const auto& grid = traj.grid();
  const FreeFlow from_start(grid, traj[0]);
  const FreeFlow from_end(grid, traj[traj.size() - 1]);
  std::vector<double> minus, plus;
  minus.reserve(traj.size());
  plus.reserve(traj.size());
  for (const auto& u : traj.states()) {
    minus.push_back(x_density_of(grid, from_start.at(u.time())));
    plus.push_back(x_density_of(grid, from_end.at(u.time())));
  }
  const auto minus_series = series_of(traj, minus);
  const auto plus_series = series_of(traj, plus);
  const double threshold = std::exp(constants.log_eta_power(constants.C3));
  for (auto& interval : tiling.intervals) {
    interval.free_x_norm_minus = std::pow(minus_series.integral(interval.begin, interval.end), 1.0 / 6.0);
    interval.free_x_norm_plus = std::pow(plus_series.integral(interval.begin, interval.end), 1.0 / 6.0);
    const bool exceptional = interval.free_x_norm_minus > threshold || interval.free_x_norm_plus > threshold;
    interval.label = exceptional ? IntervalLabel::exceptional : IntervalLabel::unexceptional;
  }
  return tiling;
}

BubbleReport bubble_report(const Trajectory& traj, const IntervalTiling& tiling, const SixConstants& constants) {
  constants.validate();
  const auto& grid = traj.grid();
  BubbleReport report;
  const double dt = traj.size() > 1 ? traj.dt_record() : 1.0;
  for (std::size_t j = 0; j < tiling.intervals.size(); ++j) {
    const auto& interval = tiling.intervals[j];
    if (interval.label != IntervalLabel::unexceptional) continue;
    BubbleRecord rec;
    rec.interval = j;
    const double len = interval.length();
    rec.log_radius = constants.log_eta_power(-3.0 * constants.C1) + 0.5 * std::log(len);
    rec.radius = std::exp(rec.log_radius);
    rec.unresolved = rec.radius > grid.r_max();
    rec.log_threshold = constants.log_eta_power(constants.C1) + std::log(len);

    // Samples covering the interval, including the bracketing ones.
    const double lo = std::floor((interval.begin - traj.t_begin()) / dt + 1e-9);
    const double hi = std::ceil((interval.end - traj.t_begin()) / dt - 1e-9);
    const auto first = static_cast<std::size_t>(std::max(0.0, lo));
    const auto last = std::min(traj.size() - 1, static_cast<std::size_t>(std::max(0.0, hi)));
    double min_mass = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i <= last; ++i) {
      const double m = rec.radius >= 2.0 * grid.r_max() ? mass(grid, traj[i]) : local_mass(grid, traj[i], rec.radius);
      min_mass = std::min(min_mass, m);
    }
    rec.min_local_mass = std::isfinite(min_mass) ? min_mass : 0.0;
    rec.ratio = rec.min_local_mass > 0.0 ? std::exp(std::log(rec.min_local_mass) - rec.log_threshold) : 0.0;
    if (rec.min_local_mass > 0.0) report.vacuous = false;
    report.records.push_back(rec);
  }
  return report;
}

std::vector<ControlRecord> interval_control_report(const IntervalTiling& tiling, const SixConstants& constants) {
  constants.validate();
  std::vector<ControlRecord> out;
  const auto& iv = tiling.intervals;
  std::size_t j = 0;
  while (j < iv.size()) {
    if (iv[j].label != IntervalLabel::unexceptional || iv[j].tail) {
      ++j;
      continue;
    }
    ControlRecord rec;
    rec.first = j;
    double longest = 0.0;
    while (j < iv.size() && iv[j].label == IntervalLabel::unexceptional && !iv[j].tail) {
      rec.sum_sqrt_lengths += std::sqrt(iv[j].length());
      longest = std::max(longest, iv[j].length());
      ++j;
    }
    rec.last = j - 1;
    rec.length = iv[rec.last].end - iv[rec.first].begin;
    rec.log_bound = constants.log_eta_power(-13.0 * constants.C1) + 0.5 * std::log(rec.length);
    rec.ratio = std::exp(std::log(rec.sum_sqrt_lengths) - rec.log_bound);
    rec.longest_fraction = longest / rec.length;
    rec.log_min_fraction = constants.log_eta_power(26.0 * constants.C1);
    out.push_back(rec);
  }
  return out;
}

}  // namespace hartree
