#include "hartree/evolution.hpp"

#include "hartree/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hartree {

const char* to_string(Integrator integrator) noexcept {
  switch (integrator) {
    case Integrator::strang: return "strang";
    case Integrator::picard: return "picard";
    case Integrator::free_flow: return "free";
  }
  return "unknown";
}

Trajectory::Trajectory(GridPtr grid, ModelParams params, std::vector<FieldState> states, double dt_record,
                       double dt_internal, Integrator provenance)
    : grid_(std::move(grid)),
      params_(params),
      states_(std::move(states)),
      dt_record_(dt_record),
      dt_internal_(dt_internal),
      provenance_(provenance) {
  if (states_.empty()) throw InvariantViolation("trajectory needs at least one state");
  if (states_.size() > 1 && !(dt_record_ > 0.0)) throw InvariantViolation("dt_record must be positive");
  const double t0 = states_.front().time();
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& s = states_[i];
    require_same_grid(*grid_, s);
    if (!s.is_finite()) throw InvariantViolation("trajectory state " + std::to_string(i) + " is not finite");
    const double expected = t0 + static_cast<double>(i) * dt_record_;
    const double scale = std::max({std::abs(expected), std::abs(dt_record_), 1.0});
    if (std::abs(s.time() - expected) > 1e-12 * scale * std::max<double>(1.0, i)) {
      std::ostringstream msg;
      msg << "trajectory state " << i << " at t = " << s.time() << " breaks uniform spacing (expected "
          << expected << ")";
      throw InvariantViolation(msg.str());
    }
  }
  boundary_flags_.reserve(states_.size());
  for (const auto& s : states_) boundary_flags_.push_back(boundary_mass_fraction(*grid_, s) > kBoundaryMassThreshold);
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(states_.size());
  for (const auto& s : states_) t.push_back(s.time());
  return t;
}

bool Trajectory::any_boundary_flag() const noexcept {
  return std::any_of(boundary_flags_.begin(), boundary_flags_.end(), [](bool b) { return b; });
}

std::size_t Trajectory::index_of(double t) const {
  if (states_.size() == 1) {
    if (std::abs(t - t_begin()) <= 1e-12 * std::max(1.0, std::abs(t))) return 0;
  } else {
    const double pos = (t - t_begin()) / dt_record_;
    const double rounded = std::round(pos);
    if (std::abs(pos - rounded) <= 1e-8 && rounded >= 0.0 && rounded < static_cast<double>(states_.size()))
      return static_cast<std::size_t>(rounded);
  }
  std::ostringstream msg;
  msg << "time " << t << " is not a sample time of the trajectory [" << t_begin() << ", " << t_end() << "]";
  throw DomainError(msg.str());
}

void Trajectory::require_within(double a, double b) const {
  const double slack = 1e-9 * std::max({1.0, std::abs(t_begin()), std::abs(t_end())});
  if (!(a <= b) || a < t_begin() - slack || b > t_end() + slack) {
    std::ostringstream msg;
    msg << "interval [" << a << ", " << b << "] lies outside the trajectory [" << t_begin() << ", " << t_end()
        << "]";
    throw DomainError(msg.str());
  }
}

namespace {

Eigen::VectorXcd free_phase(const RadialGrid& grid, double t) {
  const auto& xi = grid.xi_nodes();
  Eigen::VectorXcd phase(xi.size());
  for (Eigen::Index m = 0; m < xi.size(); ++m) phase[m] = std::polar(1.0, -xi[m] * xi[m] * t);
  return phase;
}

Eigen::VectorXcd rotate(const Eigen::VectorXcd& v, const Eigen::VectorXd& potential, double scaled_dt) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) out[k] = v[k] * std::polar(1.0, -potential[k] * scaled_dt);
  return out;
}

// Strang stepping with the potential carried between steps: the closing
// half step of one step and the opening half step of the next see the same
// |u|, so one convolution per step suffices.
class StrangStepper {
 public:
  StrangStepper(const RadialGrid& grid, const ModelParams& params, double dt)
      : grid_(grid),
        riesz_(RieszOperator::shared(grid, params.gamma)),
        coupling_(params.coupling),
        dt_(dt),
        phase_(free_phase(grid, dt)) {}

  Eigen::VectorXd potential(const Eigen::VectorXcd& v) const {
    if (coupling_ == 0.0) return Eigen::VectorXd::Zero(v.size());
    return coupling_ * riesz_->apply(v.cwiseAbs2());
  }

  /// Advances v by one step; `pot` holds the potential of |v| on entry and of
  /// the result on exit.
  void step(Eigen::VectorXcd& v, Eigen::VectorXd& pot) const {
    v = rotate(v, pot, 0.5 * dt_);
    Eigen::VectorXcd spectral = grid_.forward_matrix() * v;
    spectral = spectral.cwiseProduct(phase_);
    v = grid_.inverse_matrix() * spectral;
    pot = potential(v);
    v = rotate(v, pot, 0.5 * dt_);
  }

 private:
  const RadialGrid& grid_;
  std::shared_ptr<const RieszOperator> riesz_;
  double coupling_;
  double dt_;
  Eigen::VectorXcd phase_;
};

bool all_finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (!std::isfinite(v[k].real()) || !std::isfinite(v[k].imag())) return false;
  return true;
}

}  // namespace

FieldState free_propagate(const RadialGrid& grid, const FieldState& u, double t) {
  require_same_grid(grid, u);
  if (t == 0.0) return u;
  Eigen::VectorXcd spectral = grid.forward_matrix() * u.values();
  spectral = spectral.cwiseProduct(free_phase(grid, t));
  return FieldState(u.grid_ptr(), grid.inverse_matrix() * spectral, u.time() + t);
}

FieldState strang_step(const RadialGrid& grid, const FieldState& u, const ModelParams& params, double dt) {
  require_same_grid(grid, u);
  if (!(dt > 0.0)) throw DomainError("strang_step requires dt > 0");
  params.validate();
  StrangStepper stepper(grid, params, dt);
  Eigen::VectorXcd v = u.values();
  Eigen::VectorXd pot = stepper.potential(v);
  stepper.step(v, pot);
  return FieldState(u.grid_ptr(), std::move(v), u.time() + dt);
}

Trajectory evolve(const RadialGrid& grid, const FieldState& u0, const ModelParams& params, double t_end,
                  double dt, int record_every) {
  require_same_grid(grid, u0);
  params.validate();
  if (!(t_end > 0.0) || !(dt > 0.0)) throw DomainError("evolve requires t_end > 0 and dt > 0");
  if (record_every < 1) throw DomainError("record_every must be at least 1");
  const double ratio = t_end / dt;
  const auto steps = static_cast<long long>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-6 * std::max(1.0, ratio))
    throw DomainError("t_end must be a whole number of steps dt");
  if (!u0.is_finite()) throw DomainError("initial data is not finite");

  StrangStepper stepper(grid, params, dt);
  const double t0 = u0.time();
  std::vector<FieldState> states{u0};
  states.reserve(static_cast<std::size_t>(steps / record_every) + 1);
  Eigen::VectorXcd v = u0.values();
  Eigen::VectorXd pot = stepper.potential(v);
  FieldState last_good = u0;
  for (long long s = 1; s <= steps; ++s) {
    stepper.step(v, pot);
    const double t = t0 + static_cast<double>(s) * dt;
    if (!all_finite(v) || !all_finite(pot.cast<Complex>())) {
      std::ostringstream msg;
      msg << "non-finite field after step " << s << " (t = " << t << "); last good state at t = "
          << last_good.time();
      throw IntegrationFailure(msg.str(), last_good);
    }
    if (s % record_every == 0) {
      states.emplace_back(u0.grid_ptr(), v, t);
      last_good = states.back();
    }
  }
  return Trajectory(u0.grid_ptr(), params, std::move(states), dt * record_every, dt, Integrator::strang);
}

PicardResult picard_solve(const RadialGrid& grid, const FieldState& u0, const ModelParams& params, double t0,
                          double t1, double tol, int max_iter, int steps) {
  require_same_grid(grid, u0);
  params.validate();
  if (!(t1 > t0)) throw DomainError("picard_solve requires t1 > t0");
  if (steps < 1 || max_iter < 1) throw DomainError("picard_solve requires steps >= 1 and max_iter >= 1");
  if (!(tol > 0.0)) throw DomainError("picard_solve requires tol > 0");

  const auto M = static_cast<std::size_t>(steps);
  const double dt = (t1 - t0) / steps;
  const auto& xi = grid.xi_nodes();
  const auto& xi_w = grid.xi_weights();
  const auto riesz = RieszOperator::shared(grid, params.gamma);

  std::vector<double> times(M + 1);
  std::vector<Eigen::VectorXcd> to_lab(M + 1);  // e^{-i xi^2 (s - t0)}
  for (std::size_t j = 0; j <= M; ++j) {
    times[j] = t0 + static_cast<double>(j) * dt;
    to_lab[j] = free_phase(grid, times[j] - t0);
  }

  const Eigen::VectorXcd spectral0 = grid.forward_matrix() * u0.values();
  std::vector<Eigen::VectorXcd> spectral(M + 1), nodal(M + 1);
  for (std::size_t j = 0; j <= M; ++j) {
    spectral[j] = spectral0.cwiseProduct(to_lab[j]);
    nodal[j] = grid.inverse_matrix() * spectral[j];
  }

  auto h1_distance = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    double sum = 0.0;
    for (Eigen::Index m = 0; m < xi.size(); ++m) sum += xi_w[m] * xi[m] * xi[m] * std::norm(a[m] - b[m]);
    return std::sqrt(sum);
  };
  double scale = 0.0;
  for (Eigen::Index m = 0; m < xi.size(); ++m) scale += xi_w[m] * xi[m] * xi[m] * std::norm(spectral0[m]);
  scale = std::sqrt(scale);
  const double floor = std::max(10.0 * tol, 1e-12 * scale);

  PicardResult result{Trajectory(u0.grid_ptr(), params, {u0.at_time(t0)}, dt, dt, Integrator::picard), 0, {}, 0.0};
  int rising = 0;
  bool converged = false;
  for (int iter = 1; iter <= max_iter; ++iter) {
    // Interaction picture: g(s) = e^{+i xi^2 (s - t0)} f^(u(s)).
    std::vector<Eigen::VectorXcd> g(M + 1);
    for (std::size_t j = 0; j <= M; ++j) {
      Eigen::VectorXcd force = nodal[j];
      if (params.coupling != 0.0) {
        const Eigen::VectorXd pot = params.coupling * riesz->apply(nodal[j].cwiseAbs2());
        force = (pot.cast<Complex>().array() * nodal[j].array()).matrix();
      } else {
        force.setZero();
      }
      g[j] = (grid.forward_matrix() * force).cwiseProduct(to_lab[j].conjugate());
    }
    double distance = 0.0;
    Eigen::VectorXcd accumulated = Eigen::VectorXcd::Zero(xi.size());
    for (std::size_t j = 0; j <= M; ++j) {
      if (j > 0) accumulated += 0.5 * dt * (g[j - 1] + g[j]);
      Eigen::VectorXcd next = (spectral0 - Complex(0.0, 1.0) * accumulated).cwiseProduct(to_lab[j]);
      distance = std::max(distance, h1_distance(next, spectral[j]));
      spectral[j] = std::move(next);
      nodal[j] = grid.inverse_matrix() * spectral[j];
      if (!all_finite(nodal[j])) throw NumericFailure("picard iterate became non-finite");
    }
    if (!result.distances.empty()) {
      const double prev = result.distances.back();
      if (distance > prev) {
        ++rising;
      } else {
        rising = 0;
      }
      if (distance > floor && prev > 0.0) result.contraction_ratio = std::max(result.contraction_ratio, distance / prev);
    }
    result.distances.push_back(distance);
    result.iterations = iter;
    if (rising >= 3) {
      std::ostringstream msg;
      msg << "Duhamel iteration on [" << t0 << ", " << t1 << "] is not contracting (distance " << distance
          << " after " << iter << " iterations); shorten the interval or reduce the data";
      throw ContractionFailure(msg.str());
    }
    if (distance <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "Duhamel iteration did not reach tol = " << tol << " within " << max_iter << " iterations (last distance "
        << result.distances.back() << ")";
    throw NumericFailure(msg.str());
  }

  std::vector<FieldState> states;
  states.reserve(M + 1);
  for (std::size_t j = 0; j <= M; ++j) states.emplace_back(u0.grid_ptr(), nodal[j], times[j]);
  result.trajectory = Trajectory(u0.grid_ptr(), params, std::move(states), dt, dt, Integrator::picard);
  return result;
}

}  // namespace hartree
