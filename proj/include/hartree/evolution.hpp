#pragma once

#include "hartree/errors.hpp"
#include "hartree/field_state.hpp"
#include "hartree/nonlinearity.hpp"

#include <string>
#include <vector>

namespace hartree {

enum class Integrator { strang, picard, free_flow };

const char* to_string(Integrator integrator) noexcept;

/// Uniformly sampled, time-ordered sequence of states on one grid.
class Trajectory {
 public:
  /// Validates: at least one state, all on `grid`, all finite, times
  /// t_0 + k dt_record up to 1e-12 relative.
  Trajectory(GridPtr grid, ModelParams params, std::vector<FieldState> states, double dt_record,
             double dt_internal, Integrator provenance);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }
  const std::vector<FieldState>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  const FieldState& operator[](std::size_t i) const { return states_[i]; }
  std::vector<double> times() const;

  double dt_record() const noexcept { return dt_record_; }
  double dt_internal() const noexcept { return dt_internal_; }
  Integrator provenance() const noexcept { return provenance_; }
  double t_begin() const noexcept { return states_.front().time(); }
  double t_end() const noexcept { return states_.back().time(); }

  /// True where the state's boundary-mass fraction exceeds kBoundaryMassThreshold.
  const std::vector<bool>& boundary_flags() const noexcept { return boundary_flags_; }
  bool any_boundary_flag() const noexcept;

  /// Index of the sample at time t; throws DomainError when t is not a sample time.
  std::size_t index_of(double t) const;
  const FieldState& at(double t) const { return states_[index_of(t)]; }
  /// Throws DomainError unless t_begin <= a <= b <= t_end.
  void require_within(double a, double b) const;

 private:
  GridPtr grid_;
  ModelParams params_;
  std::vector<FieldState> states_;
  double dt_record_;
  double dt_internal_;
  Integrator provenance_;
  std::vector<bool> boundary_flags_;
};

/// Raised by evolve when a step produces NaN/Inf.
class IntegrationFailure : public NumericFailure {
 public:
  IntegrationFailure(const std::string& what, FieldState last_good)
      : NumericFailure(what), last_good_(std::move(last_good)) {}
  const FieldState& last_good() const noexcept { return last_good_; }

 private:
  FieldState last_good_;
};

/// Raised by picard_solve when successive iterates stop contracting.
class ContractionFailure : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

/// e^{it Laplacian} u: multiplication by e^{-i |xi|^2 t} in spectral space.
FieldState free_propagate(const RadialGrid& grid, const FieldState& u, double t);

/// One Strang step: half nonlinear phase, free flow, half nonlinear phase.
/// The nonlinear substep is solved exactly since |u| is invariant under it.
FieldState strang_step(const RadialGrid& grid, const FieldState& u, const ModelParams& params, double dt);

/// Repeated Strang steps from u0 up to t_end, recording every `record_every`
/// steps. t_end must be a whole number of steps; a trailing partial record
/// interval is integrated but not recorded.
Trajectory evolve(const RadialGrid& grid, const FieldState& u0, const ModelParams& params, double t_end,
                  double dt, int record_every);

struct PicardResult {
  Trajectory trajectory;
  int iterations = 0;
  /// Sup-over-samples H^1-dot distance between consecutive iterates.
  std::vector<double> distances;
  /// Largest ratio of consecutive distances above the round-off floor.
  double contraction_ratio = 0.0;
};

/// Fixed point of the discretised Duhamel map on [t0, t1], sampled at
/// `steps` + 1 uniform times with trapezoidal time quadrature, iterated from
/// the free evolution of u0. Stops when the distance drops to `tol`.
/// Throws ContractionFailure after three consecutive distance increases and
/// NumericFailure when max_iter is exhausted.
PicardResult picard_solve(const RadialGrid& grid, const FieldState& u0, const ModelParams& params, double t0,
                          double t1, double tol, int max_iter, int steps = 100);

}  // namespace hartree
