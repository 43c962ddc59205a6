#pragma once

#include "hartree/radial_grid.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace hartree {

using Complex = std::complex<double>;

/// A complex radial field sampled on the nodes of a grid at one time.
class FieldState {
 public:
  /// Throws GridMismatch if values.size() differs from the grid node count.
  FieldState(GridPtr grid, Eigen::VectorXcd values, double t = 0.0);

  static FieldState zeros(GridPtr grid, double t = 0.0);
  static FieldState from_profile(GridPtr grid, const std::function<Complex(double)>& profile,
                                 double t = 0.0);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Eigen::VectorXcd& values() const noexcept { return values_; }
  double time() const noexcept { return t_; }
  Eigen::Index size() const noexcept { return values_.size(); }

  bool is_finite() const noexcept;
  /// |u|^2 at every node.
  Eigen::VectorXd density() const { return values_.cwiseAbs2(); }

  FieldState with_values(Eigen::VectorXcd values) const { return {grid_, std::move(values), t_}; }
  FieldState at_time(double t) const { return {grid_, values_, t}; }

 private:
  GridPtr grid_;
  Eigen::VectorXcd values_;
  double t_;
};

/// Spectral coefficients f^(xi_m) on the xi nodes of a grid.
struct SpectralField {
  GridPtr grid;
  Eigen::VectorXcd values;
};

/// Throws GridMismatch unless the field lives on a grid compatible with `grid`.
void require_same_grid(const RadialGrid& grid, const FieldState& f);

SpectralField hankel_forward(const RadialGrid& grid, const FieldState& f);
FieldState hankel_inverse(const RadialGrid& grid, const SpectralField& spectral, double t = 0.0);

/// (sum_k w_k |f_k|^p)^{1/p}; p = infinity gives max_k |f_k|. Throws for p < 1.
double lp_norm(const RadialGrid& grid, const FieldState& f, double p);
/// ||grad f||_2, evaluated spectrally as ||xi f^||_2.
double h1dot_norm(const RadialGrid& grid, const FieldState& f);
/// Spectral radial derivative d f / d r at the nodes.
Eigen::VectorXcd radial_derivative(const RadialGrid& grid, const FieldState& f);

/// Fraction of the mass sitting in r > 0.9 r_max.
double boundary_mass_fraction(const RadialGrid& grid, const FieldState& f);
/// Runs whose boundary fraction exceeds this are flagged.
inline constexpr double kBoundaryMassThreshold = 1e-6;

/// Sobolev exponent 2n/(n-2).
inline double sobolev_exponent(int n) { return 2.0 * n / (n - 2.0); }

}  // namespace hartree
