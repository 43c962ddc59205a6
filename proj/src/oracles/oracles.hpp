#pragma once

// Reference computations that share no numerics with the library: direct
// quadrature, closed forms, brute-force recursions and Monte Carlo. Tests
// and the `oracle` subcommand compare the library against these.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace hartree::oracle {

using RadialFunction = std::function<double(double)>;

/// Area of S^{d-1}.
double sphere_area(int d);

// ---- Riesz potential by direct quadrature ---------------------------------

/// (|x|^{-gamma} * rho)(r) for a radial density supported in [0, support].
/// The angular integral is done in the distance variable |x - y| and the
/// radial one is split at s = r, where the angular part is singular.
double riesz_quadrature(int n, double gamma, const RadialFunction& density, double support, double r);

// ---- Gaussian closed forms ------------------------------------------------

/// Free Schrodinger evolution of e^{-|x|^2}: (1 + 4it)^{-n/2} e^{-r^2 / (1 + 4it)}.
std::complex<double> free_gaussian(int n, double t, double r);
/// sup_x |e^{it Lap} e^{-|x|^2}| times t^{n/2}.
double free_gaussian_decay_product(int n, double t);
/// L^2 norm of the free Gaussian (time independent).
double free_gaussian_l2(int n);

/// Energy pieces for u = e^{-|x|^2}.
double gaussian_mass(int n);
double gaussian_kinetic(int n);
double gaussian_potential(int n, double gamma);
/// (|x|^{-gamma} * e^{-|x|^2})(0).
double riesz_gaussian_at_origin(int n, double gamma);

// ---- Interval cascade ----------------------------------------------------

struct ReferenceCascade {
  bool hypothesis_holds = true;
  std::vector<int> generations;
  std::vector<std::size_t> chain;
  double t_star = 0.0;
};

/// Level-by-level recursion: at level k the segments are the maximal runs of
/// still unlabelled intervals.
ReferenceCascade reference_cascade(const std::vector<double>& lengths, double a, double t_begin = 0.0);

/// Every tiling of [0, 1] by dyadic intervals with at most `max_intervals`
/// pieces, as left-to-right length lists.
std::vector<std::vector<double>> dyadic_tilings(int max_intervals);

// ---- Bilinear Morawetz term by Monte Carlo -------------------------------

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Estimates the bilinear interaction term over |x|, |y| <= rho for the
/// radial density |u|^2 = density(r). Radii are drawn by inverse CDF from
/// r^{n-1} density(r); the angular average is done by adaptive
/// Gauss-Kronrod quadrature for every sample.
MonteCarloEstimate bilinear_monte_carlo(int n, double gamma, const RadialFunction& density, double rho,
                                        std::size_t samples, std::uint64_t seed);

}  // namespace hartree::oracle
