#include "oracles/oracles.hpp"

#include <cmath>
#include <numbers>

namespace hartree::oracle {

std::complex<double> free_gaussian(int n, double t, double r) {
  const std::complex<double> spread(1.0, 4.0 * t);
  return std::pow(spread, -0.5 * n) * std::exp(-r * r / spread);
}

double free_gaussian_decay_product(int n, double t) {
  return std::pow(std::abs(std::complex<double>(1.0, 4.0 * t)), -0.5 * n) * std::pow(std::abs(t), 0.5 * n);
}

double free_gaussian_l2(int n) { return std::sqrt(gaussian_mass(n)); }

double gaussian_mass(int n) { return std::pow(0.5 * std::numbers::pi, 0.5 * n); }

// (1/2) int |2x e^{-|x|^2}|^2 dx = 2 int |x|^2 e^{-2|x|^2} dx.
double gaussian_kinetic(int n) { return 0.5 * n * gaussian_mass(n); }

// With X, Y independent with density prop. to e^{-2|x|^2}, X - Y is centred
// normal with variance 1/2 per coordinate and E|X - Y|^{-gamma} reduces to
// a ratio of Gamma functions.
double gaussian_potential(int n, double gamma) {
  const double m = gaussian_mass(n);
  return 0.25 * m * m * std::tgamma(0.5 * (n - gamma)) / std::tgamma(0.5 * n);
}

double riesz_gaussian_at_origin(int n, double gamma) {
  return 0.5 * sphere_area(n) * std::tgamma(0.5 * (n - gamma));
}

}  // namespace hartree::oracle
