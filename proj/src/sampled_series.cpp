#include "hartree/sampled_series.hpp"

#include "hartree/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hartree {

SampledSeries::SampledSeries(double t0, double dt, std::vector<double> values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
  if (values_.empty()) throw DomainError("sampled series needs at least one value");
  if (values_.size() > 1 && !(dt_ > 0.0)) throw DomainError("sampled series needs dt > 0");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw NumericFailure("sampled density must be finite and nonnegative");
  cumulative_.resize(values_.size(), 0.0);
  for (std::size_t k = 1; k < values_.size(); ++k)
    cumulative_[k] = cumulative_[k - 1] + 0.5 * dt_ * (values_[k - 1] + values_[k]);
}

double SampledSeries::value_at(double t) const {
  if (values_.size() == 1) return values_.front();
  const double x = std::clamp((t - t0_) / dt_, 0.0, static_cast<double>(values_.size() - 1));
  const auto k = std::min(static_cast<std::size_t>(x), values_.size() - 2);
  const double frac = x - static_cast<double>(k);
  return values_[k] + frac * (values_[k + 1] - values_[k]);
}

double SampledSeries::cumulative_at(double t) const {
  if (values_.size() == 1) return 0.0;
  const double x = std::clamp((t - t0_) / dt_, 0.0, static_cast<double>(values_.size() - 1));
  const auto k = std::min(static_cast<std::size_t>(x), values_.size() - 2);
  const double s = (x - static_cast<double>(k)) * dt_;
  const double slope = (values_[k + 1] - values_[k]) / dt_;
  return cumulative_[k] + values_[k] * s + 0.5 * slope * s * s;
}

double SampledSeries::integral(double a, double b) const {
  if (b <= a) return 0.0;
  return std::max(0.0, cumulative_at(b) - cumulative_at(a));
}

std::optional<double> SampledSeries::solve_for(double a, double target) const {
  if (target <= 0.0) return a;
  const double goal = cumulative_at(a) + target;
  if (goal > cumulative_.back()) return std::nullopt;
  // First sample whose cumulative reaches the goal; the root lies in the cell before it.
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), goal);
  const auto k = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  const std::size_t cell = k == 0 ? 0 : k - 1;
  const double need = goal - cumulative_[cell];
  const double v0 = values_[cell];
  const double slope = (values_[cell + 1] - v0) / dt_;
  // v0 s + slope s^2 / 2 = need, smallest nonnegative root.
  double s;
  if (std::abs(slope) * dt_ <= 1e-14 * std::max(v0, 1e-300)) {
    s = v0 > 0.0 ? need / v0 : 0.0;
  } else {
    const double disc = std::max(0.0, v0 * v0 + 2.0 * slope * need);
    s = 2.0 * need / (v0 + std::sqrt(disc));
  }
  s = std::clamp(s, 0.0, dt_);
  const double t = t0_ + static_cast<double>(cell) * dt_ + s;
  return std::max(t, a);
}

}  // namespace hartree
