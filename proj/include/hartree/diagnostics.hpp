#pragma once

#include "hartree/evolution.hpp"

#include <vector>

namespace hartree {

/// Smooth radial cutoff chi(r / R): 1 for r <= R/2, 0 for r >= R.
///
/// The transition is chi(s) = S(2(1 - s)) with
/// S(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}), so |chi'| <= 4.
class BumpProfile {
 public:
  explicit BumpProfile(double scale);

  double scale() const noexcept { return scale_; }
  double operator()(double r) const noexcept { return cutoff(r / scale_); }
  /// d/dr chi(r / R).
  double derivative(double r) const noexcept { return cutoff_derivative(r / scale_) / scale_; }

  static double cutoff(double s) noexcept;
  static double cutoff_derivative(double s) noexcept;

 private:
  double scale_;
};

/// int |chi(|x|/R) u|^2 dx.
double local_mass(const RadialGrid& grid, const FieldState& u, double R);

/// Time derivative of local_mass along the flow, from the mass flux:
/// (4/R) int chi chi'(|x|/R) Im(conj(u) d_r u) dx.
double local_mass_rate(const RadialGrid& grid, const FieldState& u, double R);

struct LocalMassDrift {
  double lhs = 0.0;        ///< |Mass(t1)^{1/2} - Mass(t2)^{1/2}|
  double rhs_scale = 0.0;  ///< |t1 - t2| / R
  double ratio() const noexcept { return rhs_scale > 0.0 ? lhs / rhs_scale : 0.0; }
};

LocalMassDrift local_mass_drift(const Trajectory& traj, double R, double t1, double t2);

/// Constants of the two local mass bounds, maximised over the samples.
struct LocalMassConstants {
  /// max |d/dt Mass^{1/2}| R / ||grad u||_2
  double drift = 0.0;
  /// max Mass / (R^2 ||grad u||_2^2)
  double small_volume = 0.0;
};

LocalMassConstants measure_local_mass_constants(const Trajectory& traj, double R);

/// V(t) = int a |u|^2 dx with a(x) = |x| chi(|x|/R).
double morawetz_weight(const RadialGrid& grid, const FieldState& u, double R);

/// dV/dt = 2 Im int a'(r) d_r u conj(u) dx.
double morawetz_action(const RadialGrid& grid, const FieldState& u, double R);

/// Node weights for the ball r <= rho; the cell straddling rho gets its
/// covered fraction so the result is continuous and monotone in rho.
Eigen::VectorXd ball_weights(const RadialGrid& grid, double rho);

/// int_{t1}^{t2} int_{|x| <= A |I|^{1/2}} |u|^2 / |x|^3 dx dt.
double morawetz_linear_term(const Trajectory& traj, double t1, double t2, double A);

/// Angular average of gamma (r + s)(1 - cos theta) / |x - y|^{gamma+2} over
/// the relative angle of x and y with |x| = r, |y| = s, in dimension n.
/// Diverges on r = s when gamma + 2 >= n + 1.
double bilinear_kernel(int n, double gamma, double r, double s);

/// Pair weights K_kl for nodes inside r <= rho such that the bilinear term
/// is sum_kl K_kl |u_k|^2 |u_l|^2. Diagonal entries integrate the kernel
/// over the cell square since the kernel is singular there.
Eigen::MatrixXd bilinear_pair_weights(const RadialGrid& grid, double rho, double gamma);

/// Nonnegative interaction term of the Morawetz identity over |x|, |y| <= rho.
double morawetz_bilinear_term(const RadialGrid& grid, const FieldState& u, double rho, double gamma = 4.0);

struct MorawetzReport {
  double t1 = 0.0;
  double t2 = 0.0;
  double A = 1.0;
  double linear_term = 0.0;
  double bilinear_term = 0.0;
  double rhs_scale = 0.0;  ///< A |I|^{1/2} E(u(t1))
  double ratio = 0.0;
};

MorawetzReport morawetz_budget(const Trajectory& traj, double t1, double t2, double A);

struct DecayPoint {
  double t;
  double norm;
  double product;  ///< norm * |t|^{n(1/2 - 1/p)}
};

std::vector<DecayPoint> dispersive_decay_report(const Trajectory& traj, double p);

/// ||U(-t1) u(t1) - U(-t2) u(t2)||_{H^1-dot}.
double scattering_residual(const Trajectory& traj, double t1, double t2);

}  // namespace hartree
