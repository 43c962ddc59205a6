#include "hartree/diagnostics.hpp"
#include "hartree/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace hartree;

namespace {
const ModelParams kModel{5, 4.0, 1.0};
FieldState moving_gaussian(const GridPtr& g) {
  return free_propagate(*g, FieldState::from_profile(g, [](double r) { return Complex(std::exp(-r * r), 0.0); }),
                        0.1);
}
}  // namespace

TEST_CASE("bump profile is a smooth cutoff") {
  const BumpProfile chi(2.0);
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(1.0) == 1.0);
  CHECK(chi(2.0) == 0.0);
  CHECK(chi(3.0) == 0.0);
  double steepest = 0.0, previous = 1.0;
  for (int i = 0; i <= 2000; ++i) {
    const double s = 0.5 + 0.5 * i / 2000.0;
    steepest = std::max(steepest, std::abs(BumpProfile::cutoff_derivative(s)));
    CHECK(BumpProfile::cutoff(s) <= previous + 1e-15);
    previous = BumpProfile::cutoff(s);
  }
  CHECK(steepest <= 4.0 + 1e-12);
  const double h = 1e-6;
  CHECK(chi.derivative(1.5) == doctest::Approx((chi(1.5 + h) - chi(1.5 - h)) / (2 * h)).epsilon(1e-6));
  CHECK_THROWS_AS(BumpProfile(0.0), DomainError);
}

TEST_CASE("local mass rate matches a finite difference along the flow") {
  const auto g = build_radial_grid(5, 512, 20.0);
  const auto u = moving_gaussian(g);
  const double dt = 1e-4;
  for (double R : {1.0, 2.0}) {
    const auto mid = strang_step(*g, u, kModel, dt);
    const auto end = strang_step(*g, mid, kModel, dt);
    const double rate = (local_mass(*g, end, R) - local_mass(*g, u, R)) / (2.0 * dt);
    CHECK(local_mass_rate(*g, mid, R) == doctest::Approx(rate).epsilon(1e-3));
  }
}

TEST_CASE("Morawetz action is the time derivative of the weight") {
  const auto g = build_radial_grid(5, 512, 20.0);
  const auto u = moving_gaussian(g);
  const double dt = 1e-4;
  const auto mid = strang_step(*g, u, kModel, dt);
  const auto end = strang_step(*g, mid, kModel, dt);
  const double rate = (morawetz_weight(*g, end, 5.0) - morawetz_weight(*g, u, 5.0)) / (2.0 * dt);
  CHECK(morawetz_action(*g, mid, 5.0) == doctest::Approx(rate).epsilon(1e-3));
}

TEST_CASE("ball weights are monotone and continuous in the radius") {
  const auto g = build_radial_grid(5, 128, 10.0);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g->size());
  double previous = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double rho = 0.05 * i;
    const double volume = ball_weights(*g, rho).dot(ones);
    CHECK(volume >= previous);
    previous = volume;
  }
  const double a = ball_weights(*g, 3.0).sum();
  const double b = ball_weights(*g, 3.0 + 1e-9).sum();
  CHECK(std::abs(a - b) < 1e-6 * a);
}

TEST_CASE("bilinear kernel is nonnegative and singular on the diagonal") {
  CHECK(std::isinf(bilinear_kernel(5, 4.0, 1.0, 1.0)));
  CHECK(std::isfinite(bilinear_kernel(7, 4.0, 1.0, 1.0)));
  for (double s : {0.01, 0.5, 0.99, 1.01, 3.0}) CHECK(bilinear_kernel(5, 4.0, 1.0, s) > 0.0);
  CHECK(bilinear_kernel(5, 4.0, 1.0, 2.0) == doctest::Approx(bilinear_kernel(5, 4.0, 2.0, 1.0)));
  CHECK_THROWS_AS(bilinear_kernel(5, 4.0, 0.0, 1.0), DomainError);
  const auto g = build_radial_grid(5, 256, 20.0);
  const Eigen::MatrixXd K = bilinear_pair_weights(*g, 1.0, 4.0);
  CHECK((K.array() >= 0.0).all());
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Morawetz budget terms are positive and finite") {
  const auto g = build_radial_grid(5, 256, 20.0);
  const auto u0 = FieldState::from_profile(g, [](double r) { return Complex(std::exp(-r * r), 0.0); });
  const auto traj = evolve(*g, u0, kModel, 0.2, 1e-3, 10);
  const auto rep = morawetz_budget(traj, 0.0, 0.2, 1.0);
  CHECK(rep.linear_term > 0.0);
  CHECK(rep.bilinear_term > 0.0);
  CHECK(rep.ratio > 0.0);
  CHECK(std::isfinite(rep.ratio));
  CHECK_THROWS_AS(morawetz_linear_term(traj, 0.0, 0.2, 0.5), DomainError);
}

TEST_CASE("local mass drift and constants on a short run") {
  const auto g = build_radial_grid(5, 256, 20.0);
  const auto u0 = FieldState::from_profile(g, [](double r) { return Complex(std::exp(-r * r), 0.0); });
  const auto traj = evolve(*g, u0, kModel, 0.2, 1e-3, 10);
  const auto drift = local_mass_drift(traj, 1.0, 0.0, 0.2);
  CHECK(drift.lhs > 0.0);
  CHECK(drift.rhs_scale == doctest::Approx(0.2));
  const auto c = measure_local_mass_constants(traj, 1.0);
  CHECK(c.drift > 0.0);
  CHECK(c.small_volume > 0.0);
  CHECK(c.small_volume < 1.0);
}

TEST_CASE("scattering residual vanishes for the free flow") {
  const auto g = build_radial_grid(5, 256, 20.0);
  const auto u0 = FieldState::from_profile(g, [](double r) { return Complex(std::exp(-r * r), 0.0); });
  const auto traj = evolve(*g, u0, ModelParams{5, 4.0, 0.0}, 0.2, 1e-3, 100);
  CHECK(scattering_residual(traj, 0.0, 0.2) < 1e-10);
}
