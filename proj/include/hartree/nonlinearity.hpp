#pragma once

#include "hartree/field_state.hpp"

#include <memory>

namespace hartree {

/// V(x) = |x|^{-gamma}; f(u) = coupling (V * |u|^2) u.
struct ModelParams {
  int n = 5;
  double gamma = 4.0;
  double coupling = 1.0;

  /// Energy-critical case: gamma = 4 with n >= 5.
  bool is_critical() const noexcept { return gamma == 4.0 && n >= 5; }
  /// Throws DomainError unless 0 < gamma < n.
  void validate() const;
};

struct EnergyBreakdown {
  double kinetic = 0.0;    ///< (1/2) ||grad u||_2^2
  double potential = 0.0;  ///< (1/4) <V * |u|^2, |u|^2>
  double total = 0.0;
};

/// Riesz potential V * rho evaluated spectrally.
///
/// The multiplier c_{n,gamma} |xi|^{gamma-n} is applied on an auxiliary grid
/// of twice the radius, which pushes the images of the truncated domain far
/// away from the physical nodes. The monopole of rho is carried by a unit
/// Gaussian whose potential is known in closed form, so the spectral part
/// only ever sees a zero-mass residual. Densities must decay (finite mass).
class RieszOperator {
 public:
  RieszOperator(const RadialGrid& grid, double gamma);

  /// Cached instance shared across calls with the same grid spec and gamma.
  static std::shared_ptr<const RieszOperator> shared(const RadialGrid& grid, double gamma);

  Eigen::VectorXd apply(const Eigen::VectorXd& density) const;

  double gamma() const noexcept { return gamma_; }
  /// c_{n,gamma} = pi^{n/2} 2^{n-gamma} Gamma((n-gamma)/2) / Gamma(gamma/2).
  double multiplier_constant() const noexcept { return constant_; }

 private:
  GridSpec spec_;
  double gamma_;
  double constant_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd forward_;   // 2N x N: zero-extended density -> scaled multiplier * spectrum
  Eigen::MatrixXd inverse_;   // N x 2N
  Eigen::VectorXd gauss_spectrum_;   // forward_ applied to e^{-r^2}
  Eigen::VectorXd gauss_potential_;  // V * e^{-r^2} at the nodes
  double gauss_mass_;
};

/// (V * rho)(x) with V = |x|^{-gamma}, at the grid nodes.
/// Throws DomainError for gamma outside (0, n) or entries below -1e-12.
Eigen::VectorXd riesz_convolve(const RadialGrid& grid, const Eigen::VectorXd& density, double gamma);

/// Closed form of |x|^{-gamma} * e^{-|x|^2} at radius r:
/// pi^{n/2} Gamma((n-gamma)/2) / Gamma(n/2) 1F1(gamma/2; n/2; -r^2).
double riesz_potential_of_gaussian(int n, double gamma, double r);

FieldState hartree_force(const RadialGrid& grid, const FieldState& u, const ModelParams& params);

/// Squared L^2 norm, int |u|^2 dx.
double mass(const RadialGrid& grid, const FieldState& u);

EnergyBreakdown energy(const RadialGrid& grid, const FieldState& u, const ModelParams& params);

struct RescaledField {
  FieldState field;
  /// False when the rescaled profile leaks past the resolved band or box.
  bool resolved = true;
  double spectral_tail = 0.0;      ///< mass fraction with xi > xi_max / 2
  double boundary_fraction = 0.0;  ///< mass fraction with r > 0.9 r_max
};

/// u_lambda(x) = lambda^{(n-2)/2} u(lambda x), by cubic interpolation of the
/// radial profile (zero beyond r_max). Throws DomainError for lambda <= 0.
RescaledField rescale_field(const RadialGrid& grid, const FieldState& u, double lambda);

}  // namespace hartree
