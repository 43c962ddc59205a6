#include "oracles/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

namespace hartree::oracle {

double sphere_area(int d) { return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d); }

namespace {

// int over the sphere |y| = s of |x - y|^{-gamma}, |x| = r, per unit s^{n-1}.
// `gap` is |r - s|, passed separately so it keeps full precision near s = r.
double shell_average(int n, double gamma, double r, double s, double gap) {
  // A relative gap below 1e-13 changes the log-singular integrand by a
  // negligible amount and keeps the powers of |x - y| finite.
  const double lo = std::max(gap, 1e-13 * r);
  const double hi = r + s;
  if (lo == hi) return sphere_area(n) * std::pow(hi, -gamma);
  auto integrand = [&](double v) {
    const double d = std::exp(v);
    const double sin2 = (d - lo) * (d + lo) * (hi - d) * (hi + d) / (4.0 * r * r * s * s);
    return std::pow(d, 2.0 - gamma) * std::pow(std::max(sin2, 0.0), 0.5 * (n - 3));
  };
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, std::log(lo), std::log(hi), 8, 1e-10);
  return sphere_area(n - 1) * value / (r * s);
}

}  // namespace

double riesz_quadrature(int n, double gamma, const RadialFunction& density, double support, double r) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto shell = [&](double s, double gap) {
    if (s <= 1e-9 * r) return std::pow(s, n - 1) * density(s) * sphere_area(n) * std::pow(r, -gamma);
    return std::pow(s, n - 1) * density(s) * shell_average(n, gamma, r, s, gap);
  };
  if (r <= 0.0) {
    return sphere_area(n) *
           integrator.integrate([&](double s) { return std::pow(s, n - 1 - gamma) * density(s); }, 0.0, support);
  }
  if (r >= support) return integrator.integrate([&](double s) { return shell(s, r - s); }, 0.0, support, 1e-9);
  // The two-argument form hands over the distance to the nearer endpoint,
  // which is exact where the kernel is singular.
  // The shell integral carries a small quadrature noise floor; asking the
  // outer rule for more than that only burns refinements.
  constexpr double kOuterTol = 1e-9;
  const double below = integrator.integrate(
      [&](double s, double to_end) { return shell(s, to_end > 0.0 ? to_end : r - s); }, 0.0, r, kOuterTol);
  const double above = integrator.integrate(
      [&](double s, double to_end) { return shell(s, to_end < 0.0 ? -to_end : s - r); }, r, support, kOuterTol);
  return below + above;
}

}  // namespace hartree::oracle
