#pragma once

// Radial quadrature and the discrete Hankel transform pair for radial
// functions on R^n.
//
// Fourier convention: f^(xi) = (2 pi)^{-n/2} \int f(x) e^{-i x.xi} dx, which
// for radial f reduces to the order (n-2)/2 Hankel transform
//
//     f^(xi) = xi^{-(n-2)/2} \int_0^inf f(r) J_{(n-2)/2}(r xi) r^{n/2} dr.
//
// With this choice Plancherel holds with unit constant and -Laplacian acts as
// multiplication by |xi|^2.

#include <Eigen/Dense>

#include <memory>

namespace hartree {

struct GridSpec {
  int n = 5;
  int N = 256;
  double r_max = 20.0;

  bool operator==(const GridSpec&) const = default;
};

class RadialGrid;
using GridPtr = std::shared_ptr<const RadialGrid>;

class RadialGrid {
 public:
  /// Throws DomainError unless n >= 5, N >= 16 and r_max > 0.
  static GridPtr create(int n, int N, double r_max);

  const GridSpec& spec() const noexcept { return spec_; }
  int dimension() const noexcept { return spec_.n; }
  Eigen::Index size() const noexcept { return spec_.N; }
  double r_max() const noexcept { return spec_.r_max; }
  double cell_width() const noexcept { return spec_.r_max / spec_.N; }
  /// Bessel order (n-2)/2 of the transform.
  double order() const noexcept { return 0.5 * (spec_.n - 2); }
  /// Area of the unit sphere S^{n-1}.
  double sphere_area() const noexcept { return sphere_area_; }

  /// Cell-centred nodes r_k = (k + 1/2) r_max / N.
  const Eigen::VectorXd& nodes() const noexcept { return r_; }
  /// Midpoint weights sigma_{n-1} h r_k^{n-1}.
  const Eigen::VectorXd& weights() const noexcept { return w_; }
  const Eigen::VectorXd& xi_nodes() const noexcept { return xi_; }
  /// Spectral weights, so that sum_m xi_weights_m |f^_m|^2 = ||f||_2^2.
  const Eigen::VectorXd& xi_weights() const noexcept { return xi_w_; }
  double xi_max() const noexcept { return xi_max_; }

  /// Maps nodal values to spectral coefficients at xi_nodes.
  const Eigen::MatrixXd& forward_matrix() const noexcept { return forward_; }
  /// Exact inverse of forward_matrix (up to rounding).
  const Eigen::MatrixXd& inverse_matrix() const noexcept { return inverse_; }
  /// Maps nodal values to d/dr at the nodes (spectral differentiation).
  const Eigen::MatrixXd& radial_derivative_matrix() const noexcept { return d_dr_; }

  bool compatible(const RadialGrid& other) const noexcept { return spec_ == other.spec_; }

 private:
  explicit RadialGrid(const GridSpec& spec);

  GridSpec spec_;
  double sphere_area_ = 0.0;
  double xi_max_ = 0.0;
  Eigen::VectorXd r_, w_, xi_, xi_w_;
  Eigen::MatrixXd forward_, inverse_, d_dr_;
};

/// Same as RadialGrid::create; named after the operation it performs.
GridPtr build_radial_grid(int n, int N, double r_max);

/// Area of the unit sphere S^{d-1} in R^d.
double unit_sphere_area(int d);

namespace detail {

/// Spectral sampling used for an N-point radial grid of radius r_max.
/// Odd n: uniform cell-centred xi_m = (m + 1/2) pi / r_max with quadrature
/// weight pi / r_max. Even n: Fourier-Bessel nodes j_{nu,m} / r_max with the
/// Fourier-Bessel series weights.
struct SpectralSampling {
  Eigen::VectorXd xi;
  Eigen::VectorXd dxi;
};
SpectralSampling spectral_sampling(int n, int N, double r_max);

/// Quadrature-sampled Hankel kernel in symmetric form,
///     K_mk = sqrt(h dxi_m) sqrt(xi_m r_k) J_order(xi_m r_k),
/// which maps sqrt(h) r^{(n-1)/2} f to sqrt(dxi) xi^{(n-1)/2} f^.
Eigen::MatrixXd sampled_hankel_kernel(double order, const Eigen::VectorXd& r, double h,
                                      const SpectralSampling& xi);

}  // namespace detail

}  // namespace hartree
