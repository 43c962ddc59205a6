#include "oracles/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hartree::oracle {

namespace {

// Average over the relative angle of gamma (r + s)(1 - cos) / |x - y|^{gamma+2},
// integrated in log |x - y|.
double angular_average(int n, double gamma, double r, double s) {
  const double lo = std::abs(r - s);
  const double hi = r + s;
  auto integrand = [&](double v) {
    const double d = std::exp(v);
    const double one_minus_cos = (d - lo) * (d + lo) / (2.0 * r * s);
    const double sin2 = (d - lo) * (d + lo) * (hi - d) * (hi + d) / (4.0 * r * r * s * s);
    return gamma * (r + s) * one_minus_cos * std::pow(d, -gamma) * std::pow(std::max(sin2, 0.0), 0.5 * (n - 3)) /
           (r * s);
  };
  const double total = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      integrand, std::log(lo), std::log(hi), 15, 1e-9);
  return total * sphere_area(n - 1) / sphere_area(n);
}

}  // namespace

MonteCarloEstimate bilinear_monte_carlo(int n, double gamma, const RadialFunction& density, double rho,
                                        std::size_t samples, std::uint64_t seed) {
  if (samples < 2 || !(rho > 0.0)) throw std::invalid_argument("bilinear_monte_carlo needs rho > 0, samples >= 2");
  auto radial = [&](double r) { return std::pow(r, n - 1) * density(r); };
  const double ball_mass = sphere_area(n) * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                                radial, 0.0, rho, 20, 1e-12);

  // Tabulated CDF of the radial law, inverted by linear interpolation.
  constexpr std::size_t kTable = 200000;
  std::vector<double> grid(kTable + 1), cdf(kTable + 1, 0.0);
  for (std::size_t i = 0; i <= kTable; ++i) grid[i] = rho * static_cast<double>(i) / kTable;
  for (std::size_t i = 1; i <= kTable; ++i) {
    const double mid = 0.5 * (grid[i - 1] + grid[i]);
    const double h = grid[i] - grid[i - 1];
    cdf[i] = cdf[i - 1] + h * (radial(grid[i - 1]) + 4.0 * radial(mid) + radial(grid[i])) / 6.0;
  }
  for (auto& c : cdf) c /= cdf.back();
  auto draw = [&](double q) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), q);
    const auto i = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1, kTable);
    const double span = cdf[i] - cdf[i - 1];
    const double f = span > 0.0 ? (q - cdf[i - 1]) / span : 0.5;
    return grid[i - 1] + f * (grid[i] - grid[i - 1]);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double r = draw(uniform(rng));
    const double s = draw(uniform(rng));
    const double value = r == s ? 0.0 : angular_average(n, gamma, r, s);
    sum += value;
    sum2 += value * value;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(0.0, sum2 / count - mean * mean);
  const double scale = ball_mass * ball_mass;
  return {scale * mean, scale * std::sqrt(var / (count - 1.0))};
}

}  // namespace hartree::oracle
