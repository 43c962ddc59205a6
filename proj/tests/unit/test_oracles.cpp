#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hartree::oracle;

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(sphere_area(5) == doctest::Approx(8.0 * std::numbers::pi * std::numbers::pi / 3.0));
}

TEST_CASE("direct quadrature of the Riesz potential at the origin") {
  const double origin = riesz_quadrature(5, 4.0, [](double s) { return std::exp(-s * s); }, 12.0, 0.0);
  CHECK(origin == doctest::Approx(riesz_gaussian_at_origin(5, 4.0)).epsilon(1e-8));
  CHECK(riesz_gaussian_at_origin(5, 4.0) == doctest::Approx(23.3245578).epsilon(1e-8));
  const double near = riesz_quadrature(5, 4.0, [](double s) { return std::exp(-s * s); }, 12.0, 1e-3);
  CHECK(near == doctest::Approx(origin).epsilon(1e-5));
}

TEST_CASE("far field of the Riesz potential is the monopole") {
  const double r = 40.0;
  const double v = riesz_quadrature(5, 3.0, [](double s) { return std::exp(-s * s); }, 12.0, r);
  CHECK(v == doctest::Approx(std::pow(std::numbers::pi, 2.5) * std::pow(r, -3.0)).epsilon(2e-3));
}

TEST_CASE("free Gaussian closed forms") {
  CHECK(std::abs(free_gaussian(5, 0.0, 1.0) - std::exp(-1.0)) < 1e-15);
  CHECK(free_gaussian_decay_product(5, 1e6) == doctest::Approx(std::pow(0.25, 2.5)).epsilon(1e-9));
  CHECK(gaussian_kinetic(5) == doctest::Approx(2.5 * gaussian_mass(5)));
}

TEST_CASE("dyadic tiling enumeration") {
  CHECK(dyadic_tilings(1).size() == 1);
  CHECK(dyadic_tilings(2).size() == 2);
  CHECK(dyadic_tilings(3).size() == 4);
  for (const auto& t : dyadic_tilings(8)) {
    double sum = 0.0;
    for (double x : t) sum += x;
    CHECK(sum == 1.0);
    CHECK(t.size() <= 8);
  }
}

TEST_CASE("reference cascade on a hand example") {
  const auto ref = reference_cascade({4, 1, 0.5, 0.5, 2}, 0.5);
  CHECK(ref.hypothesis_holds);
  CHECK(ref.generations == std::vector<int>{1, 3, 4, 4, 2});
  CHECK(ref.chain == std::vector<std::size_t>{0, 4, 1, 2});
  CHECK_FALSE(reference_cascade({1, 1, 1, 1}, 0.5).hypothesis_holds);
}

TEST_CASE("Monte Carlo estimate is reproducible for a fixed seed") {
  auto density = [](double s) { return std::exp(-2.0 * s * s); };
  const auto a = bilinear_monte_carlo(5, 4.0, density, 1.0, 2000, 3);
  const auto b = bilinear_monte_carlo(5, 4.0, density, 1.0, 2000, 3);
  CHECK(a.value == b.value);
  CHECK(a.std_error > 0.0);
}
