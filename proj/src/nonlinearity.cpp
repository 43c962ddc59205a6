#include "hartree/nonlinearity.hpp"

#include "hartree/errors.hpp"

#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace hartree {

namespace {

void check_gamma(int n, double gamma) {
  if (!(gamma > 0.0 && gamma < n)) {
    std::ostringstream msg;
    msg << "convolution exponent gamma = " << gamma << " must satisfy 0 < gamma < n = " << n;
    throw DomainError(msg.str());
  }
}

}  // namespace

void ModelParams::validate() const {
  if (n < 5) throw DomainError("dimension n must be at least 5");
  check_gamma(n, gamma);
  if (!std::isfinite(coupling)) throw DomainError("coupling must be finite");
}

double riesz_potential_of_gaussian(int n, double gamma, double r) {
  const double prefactor =
      std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(0.5 * (n - gamma)) / std::tgamma(0.5 * n);
  return prefactor * boost::math::hypergeometric_1F1(0.5 * gamma, 0.5 * n, -r * r);
}

RieszOperator::RieszOperator(const RadialGrid& grid, double gamma)
    : spec_(grid.spec()), gamma_(gamma) {
  const int n = spec_.n;
  const int N = spec_.N;
  check_gamma(n, gamma);
  constant_ = std::pow(std::numbers::pi, 0.5 * n) * std::pow(2.0, n - gamma) *
              std::tgamma(0.5 * (n - gamma)) / std::tgamma(0.5 * gamma);

  const double h = grid.cell_width();
  const auto& r = grid.nodes();
  weights_ = grid.weights();
  Eigen::VectorXd a(N);
  for (int k = 0; k < N; ++k) a[k] = std::sqrt(h) * std::pow(r[k], 0.5 * (n - 1));

  // Auxiliary grid: same cell width, twice the radius, density zero-extended.
  const auto padded = detail::spectral_sampling(n, 2 * N, 2.0 * spec_.r_max);
  const Eigen::MatrixXd kernel = detail::sampled_hankel_kernel(grid.order(), r, h, padded);
  Eigen::VectorXd multiplier(2 * N);
  for (int m = 0; m < 2 * N; ++m) multiplier[m] = constant_ * std::pow(padded.xi[m], gamma - n);

  forward_ = multiplier.asDiagonal() * kernel * a.asDiagonal();
  inverse_ = a.cwiseInverse().asDiagonal() * kernel.transpose();

  Eigen::VectorXd gauss(N);
  gauss_potential_.resize(N);
  for (int k = 0; k < N; ++k) {
    gauss[k] = std::exp(-r[k] * r[k]);
    gauss_potential_[k] = riesz_potential_of_gaussian(n, gamma, r[k]);
  }
  gauss_mass_ = weights_.dot(gauss);
  gauss_spectrum_ = forward_ * gauss;
}

std::shared_ptr<const RieszOperator> RieszOperator::shared(const RadialGrid& grid, double gamma) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const RieszOperator>> cache;
  const Key key{grid.spec().n, grid.spec().N, grid.spec().r_max, gamma};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto op = std::make_shared<const RieszOperator>(grid, gamma);
  cache.emplace(key, op);
  return op;
}

Eigen::VectorXd RieszOperator::apply(const Eigen::VectorXd& density) const {
  if (density.size() != spec_.N) throw GridMismatch("density length does not match the grid");
  const double scale = weights_.dot(density) / gauss_mass_;
  const Eigen::VectorXd residual_spectrum = forward_ * density - scale * gauss_spectrum_;
  return inverse_ * residual_spectrum + scale * gauss_potential_;
}

Eigen::VectorXd riesz_convolve(const RadialGrid& grid, const Eigen::VectorXd& density, double gamma) {
  check_gamma(grid.dimension(), gamma);
  if (density.size() != grid.size()) throw GridMismatch("density length does not match the grid");
  for (Eigen::Index k = 0; k < density.size(); ++k) {
    if (!(density[k] >= -1e-12)) {
      std::ostringstream msg;
      msg << "density must be nonnegative; entry " << k << " is " << density[k];
      throw DomainError(msg.str());
    }
  }
  return RieszOperator::shared(grid, gamma)->apply(density);
}

FieldState hartree_force(const RadialGrid& grid, const FieldState& u, const ModelParams& params) {
  require_same_grid(grid, u);
  const Eigen::VectorXd potential = riesz_convolve(grid, u.density(), params.gamma);
  Eigen::VectorXcd out = params.coupling * (potential.cast<Complex>().array() * u.values().array()).matrix();
  return u.with_values(std::move(out));
}

double mass(const RadialGrid& grid, const FieldState& u) {
  require_same_grid(grid, u);
  return grid.weights().dot(u.density());
}

EnergyBreakdown energy(const RadialGrid& grid, const FieldState& u, const ModelParams& params) {
  require_same_grid(grid, u);
  EnergyBreakdown e;
  const double grad = h1dot_norm(grid, u);
  e.kinetic = 0.5 * grad * grad;
  const Eigen::VectorXd density = u.density();
  const Eigen::VectorXd potential = riesz_convolve(grid, density, params.gamma);
  e.potential = 0.25 * params.coupling * grid.weights().dot(potential.cwiseProduct(density));
  e.total = e.kinetic + e.potential;
  return e;
}

namespace {

// Four-point Lagrange interpolation on the cell-centred nodes, using the
// even extension across r = 0 and zero beyond r_max.
Complex interpolate_cubic(const Eigen::VectorXcd& v, double h, double x) {
  const Eigen::Index N = v.size();
  if (x >= N * h) return {0.0, 0.0};
  const double s = x / h - 0.5;
  const auto base = static_cast<Eigen::Index>(std::floor(s));
  const double frac = s - static_cast<double>(base);
  auto at = [&](Eigen::Index j) -> Complex {
    if (j < 0) j = -j - 1;
    return j < N ? v[j] : Complex{0.0, 0.0};
  };
  const double t = frac;
  const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return c0 * at(base - 1) + c1 * at(base) + c2 * at(base + 1) + c3 * at(base + 2);
}

}  // namespace

RescaledField rescale_field(const RadialGrid& grid, const FieldState& u, double lambda) {
  require_same_grid(grid, u);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("scale lambda must be positive");
  const double h = grid.cell_width();
  const double amplitude = std::pow(lambda, 0.5 * (grid.dimension() - 2));
  const auto& r = grid.nodes();
  Eigen::VectorXcd out(grid.size());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = amplitude * interpolate_cubic(u.values(), h, lambda * r[k]);

  RescaledField result{u.with_values(std::move(out))};
  const double total = mass(grid, result.field);
  if (total > 0.0) {
    const auto spectral = hankel_forward(grid, result.field);
    const auto& xi = grid.xi_nodes();
    double tail = 0.0;
    for (Eigen::Index m = 0; m < xi.size(); ++m)
      if (xi[m] > 0.5 * grid.xi_max()) tail += grid.xi_weights()[m] * std::norm(spectral.values[m]);
    result.spectral_tail = tail / total;
    result.boundary_fraction = boundary_mass_fraction(grid, result.field);
  }
  result.resolved = result.spectral_tail <= 1e-10 && result.boundary_fraction <= kBoundaryMassThreshold;
  return result;
}

}  // namespace hartree
