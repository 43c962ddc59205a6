#include "hartree/field_state.hpp"

#include "hartree/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hartree {

FieldState::FieldState(GridPtr grid, Eigen::VectorXcd values, double t)
    : grid_(std::move(grid)), values_(std::move(values)), t_(t) {
  if (!grid_) throw GridMismatch("field state constructed without a grid");
  if (values_.size() != grid_->size()) {
    std::ostringstream msg;
    msg << "field has " << values_.size() << " values but the grid has " << grid_->size() << " nodes";
    throw GridMismatch(msg.str());
  }
}

FieldState FieldState::zeros(GridPtr grid, double t) {
  const auto N = grid->size();
  return {std::move(grid), Eigen::VectorXcd::Zero(N), t};
}

FieldState FieldState::from_profile(GridPtr grid, const std::function<Complex(double)>& profile,
                                    double t) {
  Eigen::VectorXcd v(grid->size());
  const auto& r = grid->nodes();
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = profile(r[k]);
  return {std::move(grid), std::move(v), t};
}

bool FieldState::is_finite() const noexcept {
  for (Eigen::Index k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k].real()) || !std::isfinite(values_[k].imag())) return false;
  return true;
}

void require_same_grid(const RadialGrid& grid, const FieldState& f) {
  if (!grid.compatible(f.grid())) {
    std::ostringstream msg;
    msg << "grid mismatch: field on (n=" << f.grid().dimension() << ", N=" << f.grid().size()
        << ", r_max=" << f.grid().r_max() << "), expected (n=" << grid.dimension()
        << ", N=" << grid.size() << ", r_max=" << grid.r_max() << ")";
    throw GridMismatch(msg.str());
  }
}

SpectralField hankel_forward(const RadialGrid& grid, const FieldState& f) {
  require_same_grid(grid, f);
  return {f.grid_ptr(), grid.forward_matrix() * f.values()};
}

FieldState hankel_inverse(const RadialGrid& grid, const SpectralField& spectral, double t) {
  if (!spectral.grid || !grid.compatible(*spectral.grid))
    throw GridMismatch("spectral coefficients belong to a different grid");
  if (spectral.values.size() != grid.size())
    throw GridMismatch("spectral coefficient count does not match the grid");
  return {spectral.grid, grid.inverse_matrix() * spectral.values, t};
}

double lp_norm(const RadialGrid& grid, const FieldState& f, double p) {
  require_same_grid(grid, f);
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  const Eigen::VectorXd mod = f.values().cwiseAbs();
  if (std::isinf(p)) return mod.size() ? mod.maxCoeff() : 0.0;
  const auto& w = grid.weights();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < mod.size(); ++k) sum += w[k] * std::pow(mod[k], p);
  return std::pow(sum, 1.0 / p);
}

double h1dot_norm(const RadialGrid& grid, const FieldState& f) {
  const auto spectral = hankel_forward(grid, f);
  const auto& xi = grid.xi_nodes();
  const auto& w = grid.xi_weights();
  double sum = 0.0;
  for (Eigen::Index m = 0; m < xi.size(); ++m) sum += w[m] * xi[m] * xi[m] * std::norm(spectral.values[m]);
  return std::sqrt(sum);
}

Eigen::VectorXcd radial_derivative(const RadialGrid& grid, const FieldState& f) {
  require_same_grid(grid, f);
  return grid.radial_derivative_matrix() * f.values();
}

double boundary_mass_fraction(const RadialGrid& grid, const FieldState& f) {
  require_same_grid(grid, f);
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  const double edge = 0.9 * grid.r_max();
  double total = 0.0;
  double outer = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    const double m = w[k] * std::norm(f.values()[k]);
    total += m;
    if (r[k] > edge) outer += m;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace hartree
