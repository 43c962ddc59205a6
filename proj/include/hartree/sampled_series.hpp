#pragma once

#include <optional>
#include <vector>

namespace hartree {

/// Nonnegative density sampled at t0 + k dt, read as the piecewise-linear
/// interpolant. Integrals are exact for that interpolant, so they are
/// additive over abutting intervals up to rounding.
class SampledSeries {
 public:
  SampledSeries(double t0, double dt, std::vector<double> values);

  double t_begin() const noexcept { return t0_; }
  double t_end() const noexcept { return t0_ + dt_ * static_cast<double>(values_.size() - 1); }
  double dt() const noexcept { return dt_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double value_at(double t) const;
  /// Integral over [a, b]; a and b are clamped to the sampled range.
  double integral(double a, double b) const;
  /// Smallest b >= a with integral(a, b) = target, or nullopt when the
  /// remaining integral falls short.
  std::optional<double> solve_for(double a, double target) const;

 private:
  double cumulative_at(double t) const;

  double t0_;
  double dt_;
  std::vector<double> values_;
  std::vector<double> cumulative_;  // integral from t0 to each sample
};

}  // namespace hartree
