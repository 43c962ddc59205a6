#include "hartree/radial_grid.hpp"

#include "hartree/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace hartree {

double unit_sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace detail {

SpectralSampling spectral_sampling(int n, int N, double r_max) {
  SpectralSampling s;
  s.xi.resize(N);
  s.dxi.resize(N);
  if (n % 2 == 1) {
    const double step = std::numbers::pi / r_max;
    for (int m = 0; m < N; ++m) {
      s.xi[m] = (m + 0.5) * step;
      s.dxi[m] = step;
    }
    return s;
  }
  // Integer Bessel order: the uniform midpoint rule in xi is not accurate
  // for the inverse transform, the Fourier-Bessel series is.
  const double nu = 0.5 * (n - 2);
  std::vector<double> zeros;
  zeros.reserve(N);
  boost::math::cyl_bessel_j_zero(nu, 1, static_cast<unsigned>(N), std::back_inserter(zeros));
  for (int m = 0; m < N; ++m) {
    const double j1 = boost::math::cyl_bessel_j(nu + 1.0, zeros[m]);
    s.xi[m] = zeros[m] / r_max;
    s.dxi[m] = 2.0 / (r_max * r_max * j1 * j1 * s.xi[m]);
  }
  return s;
}

Eigen::MatrixXd sampled_hankel_kernel(double order, const Eigen::VectorXd& r, double h,
                                      const SpectralSampling& xi) {
  const Eigen::Index M = xi.xi.size();
  const Eigen::Index K = r.size();
  Eigen::MatrixXd kernel(M, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index m = 0; m < M; ++m) {
      const double z = xi.xi[m] * r[k];
      kernel(m, k) = std::sqrt(h * xi.dxi[m] * z) * boost::math::cyl_bessel_j(order, z);
    }
  }
  return kernel;
}

}  // namespace detail

GridPtr RadialGrid::create(int n, int N, double r_max) {
  if (n < 5) {
    std::ostringstream msg;
    msg << "dimension n = " << n << " is outside the supported range n >= 5";
    throw DomainError(msg.str());
  }
  if (N < 16) throw DomainError("node count N must be at least 16, got " + std::to_string(N));
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw DomainError("r_max must be positive and finite");
  return GridPtr(new RadialGrid(GridSpec{n, N, r_max}));
}

GridPtr build_radial_grid(int n, int N, double r_max) { return RadialGrid::create(n, N, r_max); }

RadialGrid::RadialGrid(const GridSpec& spec) : spec_(spec) {
  const int n = spec.n;
  const int N = spec.N;
  const double h = cell_width();
  sphere_area_ = unit_sphere_area(n);

  r_.resize(N);
  w_.resize(N);
  Eigen::VectorXd a(N);
  for (int k = 0; k < N; ++k) {
    r_[k] = (k + 0.5) * h;
    a[k] = std::sqrt(h) * std::pow(r_[k], 0.5 * (n - 1));
    w_[k] = sphere_area_ * a[k] * a[k];
  }

  const auto sampling = detail::spectral_sampling(n, N, spec.r_max);
  xi_ = sampling.xi;
  xi_max_ = xi_[N - 1] + 0.5 * (xi_[N - 1] - xi_[N - 2]);
  Eigen::VectorXd b(N);
  xi_w_.resize(N);
  for (int m = 0; m < N; ++m) {
    b[m] = std::sqrt(sampling.dxi[m]) * std::pow(xi_[m], 0.5 * (n - 1));
    xi_w_[m] = sphere_area_ * b[m] * b[m];
  }

  // The sampled kernel is orthogonal only up to a handful of directions
  // concentrated near r = 0 and xi = 0; its polar factor is the nearest
  // orthogonal matrix and makes the free propagator exactly unitary.
  const Eigen::MatrixXd kernel = detail::sampled_hankel_kernel(order(), r_, h, sampling);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(kernel, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd orthogonal = svd.matrixU() * svd.matrixV().transpose();

  forward_ = b.cwiseInverse().asDiagonal() * orthogonal * a.asDiagonal();
  inverse_ = a.cwiseInverse().asDiagonal() * orthogonal.transpose() * b.asDiagonal();

  // d/dr [r^{-nu} J_nu(r xi)] = -xi r^{-nu} J_{nu+1}(r xi). Built from the raw
  // quadrature kernels, which are more accurate near the origin than the
  // orthogonalised pair.
  const Eigen::MatrixXd kernel_up = detail::sampled_hankel_kernel(order() + 1.0, r_, h, sampling);
  d_dr_ = -(a.cwiseInverse().asDiagonal() * kernel_up.transpose() * xi_.asDiagonal() * kernel *
            a.asDiagonal());
}

}  // namespace hartree
