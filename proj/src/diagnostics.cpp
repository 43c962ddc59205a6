#include "hartree/diagnostics.hpp"

#include "hartree/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hartree {

BumpProfile::BumpProfile(double scale) : scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("bump radius must be positive");
}

namespace {

// S(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}) on (0, 1).
double smooth_step(double x) noexcept { return 1.0 / (1.0 + std::exp(1.0 / x - 1.0 / (1.0 - x))); }

}  // namespace

double BumpProfile::cutoff(double s) noexcept {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  return smooth_step(2.0 * (1.0 - s));
}

double BumpProfile::cutoff_derivative(double s) noexcept {
  if (s <= 0.5 || s >= 1.0) return 0.0;
  const double x = 2.0 * (1.0 - s);
  const double S = smooth_step(x);
  if (S == 0.0 || S == 1.0) return 0.0;
  const double dS = S * (1.0 - S) * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x)));
  return -2.0 * dS;
}

double local_mass(const RadialGrid& grid, const FieldState& u, double R) {
  require_same_grid(grid, u);
  const BumpProfile chi(R);
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    const double c = chi(r[k]);
    if (c != 0.0) sum += w[k] * c * c * std::norm(u.values()[k]);
  }
  return sum;
}

double local_mass_rate(const RadialGrid& grid, const FieldState& u, double R) {
  require_same_grid(grid, u);
  const BumpProfile chi(R);
  const Eigen::VectorXcd du = radial_derivative(grid, u);
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    const double d = chi.derivative(r[k]);
    if (d != 0.0) sum += w[k] * chi(r[k]) * d * (std::conj(u.values()[k]) * du[k]).imag();
  }
  return 4.0 * sum;
}

LocalMassDrift local_mass_drift(const Trajectory& traj, double R, double t1, double t2) {
  if (!(R > 0.0)) throw DomainError("local mass radius must be positive");
  const auto& u1 = traj.at(t1);
  const auto& u2 = traj.at(t2);
  LocalMassDrift d;
  d.lhs = std::abs(std::sqrt(local_mass(traj.grid(), u1, R)) - std::sqrt(local_mass(traj.grid(), u2, R)));
  d.rhs_scale = std::abs(t1 - t2) / R;
  return d;
}

LocalMassConstants measure_local_mass_constants(const Trajectory& traj, double R) {
  LocalMassConstants c;
  for (const auto& u : traj.states()) {
    const double m = local_mass(traj.grid(), u, R);
    const double g = h1dot_norm(traj.grid(), u);
    if (!(m > 0.0) || !(g > 0.0)) continue;
    const double rate = local_mass_rate(traj.grid(), u, R);
    c.drift = std::max(c.drift, std::abs(rate) * R / (2.0 * std::sqrt(m) * g));
    c.small_volume = std::max(c.small_volume, m / (R * R * g * g));
  }
  return c;
}

double morawetz_weight(const RadialGrid& grid, const FieldState& u, double R) {
  require_same_grid(grid, u);
  const BumpProfile eta(R);
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) sum += w[k] * r[k] * eta(r[k]) * std::norm(u.values()[k]);
  return sum;
}

double morawetz_action(const RadialGrid& grid, const FieldState& u, double R) {
  require_same_grid(grid, u);
  const BumpProfile eta(R);
  const Eigen::VectorXcd du = radial_derivative(grid, u);
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    const double slope = eta(r[k]) + r[k] * eta.derivative(r[k]);
    if (slope != 0.0) sum += w[k] * slope * (du[k] * std::conj(u.values()[k])).imag();
  }
  return 2.0 * sum;
}

Eigen::VectorXd ball_weights(const RadialGrid& grid, double rho) {
  const double h = grid.cell_width();
  Eigen::VectorXd bw = grid.weights();
  for (Eigen::Index k = 0; k < bw.size(); ++k) {
    const double covered = std::clamp((rho - static_cast<double>(k) * h) / h, 0.0, 1.0);
    bw[k] *= covered;
  }
  return bw;
}

namespace {

double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * dt;
}

std::pair<std::size_t, std::size_t> sample_range(const Trajectory& traj, double t1, double t2) {
  traj.require_within(t1, t2);
  return {traj.index_of(t1), traj.index_of(t2)};
}

}  // namespace

double morawetz_linear_term(const Trajectory& traj, double t1, double t2, double A) {
  if (!(A >= 1.0)) throw DomainError("Morawetz radius multiplier A must be at least 1");
  const auto [i1, i2] = sample_range(traj, t1, t2);
  if (i1 == i2) return 0.0;
  const double rho = A * std::sqrt(t2 - t1);
  const Eigen::VectorXd bw = ball_weights(traj.grid(), rho);
  const auto& r = traj.grid().nodes();
  std::vector<double> spatial;
  for (std::size_t i = i1; i <= i2; ++i) {
    const Eigen::VectorXd dens = traj[i].density();
    double sum = 0.0;
    for (Eigen::Index k = 0; k < r.size(); ++k)
      if (bw[k] > 0.0) sum += bw[k] * dens[k] / (r[k] * r[k] * r[k]);
    spatial.push_back(sum);
  }
  return trapezoid(spatial, traj.dt_record());
}

double bilinear_kernel(int n, double gamma, double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw DomainError("bilinear kernel needs positive radii");
  const double gap = (r - s) * (r - s);
  if (gap == 0.0 && gamma + 2.0 >= n + 1.0) return std::numeric_limits<double>::infinity();
  const double half_power = 0.5 * (gamma + 2.0);
  auto integrand = [&](double theta) {
    const double half_sin = std::sin(0.5 * theta);
    const double one_minus_cos = 2.0 * half_sin * half_sin;
    const double dist2 = gap + 4.0 * r * s * half_sin * half_sin;
    return std::pow(std::sin(theta), n - 2) * gamma * (r + s) * one_minus_cos / std::pow(dist2, half_power);
  };
  using Rule = boost::math::quadrature::gauss<double, 8>;
  // The integrand changes scale near theta0 = |r - s| / sqrt(rs); panels
  // grow geometrically from there.
  const double theta0 = std::sqrt(gap / (r * s));
  std::vector<double> breaks{0.0};
  if (theta0 > 0.5) {
    for (int j = 1; j <= 8; ++j) breaks.push_back(std::numbers::pi * j / 8.0);
  } else {
    double edge = theta0 > 0.0 ? 0.5 * theta0 : 1e-12;
    while (edge < std::numbers::pi) {
      breaks.push_back(edge);
      edge *= 2.0;
    }
    breaks.push_back(std::numbers::pi);
  }
  double total = 0.0;
  for (std::size_t j = 1; j < breaks.size(); ++j) total += Rule::integrate(integrand, breaks[j - 1], breaks[j]);
  const double norm = std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (n - 1)) / std::tgamma(0.5 * n);
  return total / norm;
}

constexpr Eigen::Index kBand = 4;

Eigen::MatrixXd bilinear_pair_weights(const RadialGrid& grid, double rho, double gamma) {
  if (!(rho > 0.0)) throw DomainError("bilinear region radius must be positive");
  const int n = grid.dimension();
  const double h = grid.cell_width();
  const auto& r = grid.nodes();
  const Eigen::VectorXd bw = ball_weights(grid, rho);
  Eigen::Index m = 0;
  while (m < bw.size() && bw[m] > 0.0) ++m;

  // Pairs within kBand cells of the diagonal are integrated over the cell
  // square; the interleaved Gauss rules never sample r = s.
  const auto& xa = boost::math::quadrature::gauss<double, 6>::abscissa();
  const auto& wa = boost::math::quadrature::gauss<double, 6>::weights();
  const auto& xb = boost::math::quadrature::gauss<double, 7>::abscissa();
  const auto& wb = boost::math::quadrature::gauss<double, 7>::weights();
  auto expand = [](const auto& abscissa, const auto& weights) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      pts.emplace_back(abscissa[i], weights[i]);
      if (abscissa[i] != 0.0) pts.emplace_back(-abscissa[i], weights[i]);
    }
    return pts;
  };
  const auto pa = expand(xa, wa);
  const auto pb = expand(xb, wb);
  const double sphere = grid.sphere_area();
  auto cell_pair = [&](Eigen::Index k, Eigen::Index l) {
    double sum = 0.0;
    for (const auto& [x, wx] : pa)
      for (const auto& [y, wy] : pb) {
        const double rr = r[k] + 0.5 * h * x;
        const double ss = r[l] + 0.5 * h * y;
        sum += wx * wy * bilinear_kernel(n, gamma, rr, ss) * std::pow(rr * ss, n - 1);
      }
    const double covered = (bw[k] / grid.weights()[k]) * (bw[l] / grid.weights()[l]);
    return sum * 0.25 * h * h * sphere * sphere * covered;
  };

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(grid.size(), grid.size());
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = k; l < m; ++l) {
      const double value =
          l - k <= kBand ? cell_pair(k, l) : bw[k] * bw[l] * bilinear_kernel(n, gamma, r[k], r[l]);
      K(k, l) = value;
      K(l, k) = value;
    }
  return K;
}

double morawetz_bilinear_term(const RadialGrid& grid, const FieldState& u, double rho, double gamma) {
  require_same_grid(grid, u);
  const Eigen::MatrixXd K = bilinear_pair_weights(grid, rho, gamma);
  const Eigen::VectorXd dens = u.density();
  return dens.dot(K * dens);
}

MorawetzReport morawetz_budget(const Trajectory& traj, double t1, double t2, double A) {
  MorawetzReport report;
  report.t1 = t1;
  report.t2 = t2;
  report.A = A;
  report.linear_term = morawetz_linear_term(traj, t1, t2, A);
  const auto [i1, i2] = sample_range(traj, t1, t2);
  const double length = t2 - t1;
  if (i1 != i2) {
    const double rho = A * std::sqrt(length);
    const Eigen::MatrixXd K = bilinear_pair_weights(traj.grid(), rho, traj.params().gamma);
    std::vector<double> values;
    for (std::size_t i = i1; i <= i2; ++i) {
      const Eigen::VectorXd dens = traj[i].density();
      values.push_back(dens.dot(K * dens));
    }
    report.bilinear_term = trapezoid(values, traj.dt_record());
  }
  const double E = energy(traj.grid(), traj[i1], traj.params()).total;
  report.rhs_scale = A * std::sqrt(length) * E;
  report.ratio = report.rhs_scale > 0.0 ? (report.linear_term + report.bilinear_term) / report.rhs_scale : 0.0;
  return report;
}

std::vector<DecayPoint> dispersive_decay_report(const Trajectory& traj, double p) {
  if (!(p >= 2.0)) throw DomainError("dispersive decay needs p >= 2");
  const double exponent = traj.grid().dimension() * (0.5 - (std::isinf(p) ? 0.0 : 1.0 / p));
  std::vector<DecayPoint> out;
  out.reserve(traj.size());
  for (const auto& u : traj.states()) {
    const double norm = lp_norm(traj.grid(), u, p);
    const double weight = exponent == 0.0 ? 1.0 : std::pow(std::abs(u.time()), exponent);
    out.push_back({u.time(), norm, norm * weight});
  }
  return out;
}

double scattering_residual(const Trajectory& traj, double t1, double t2) {
  const auto& grid = traj.grid();
  const auto& u1 = traj.at(t1);
  const auto& u2 = traj.at(t2);
  const auto& xi = grid.xi_nodes();
  const auto& xw = grid.xi_weights();
  const Eigen::VectorXcd a = grid.forward_matrix() * u1.values();
  const Eigen::VectorXcd b = grid.forward_matrix() * u2.values();
  double sum = 0.0;
  for (Eigen::Index m = 0; m < xi.size(); ++m) {
    const double q = xi[m] * xi[m];
    const Complex diff = a[m] * std::polar(1.0, q * u1.time()) - b[m] * std::polar(1.0, q * u2.time());
    sum += xw[m] * q * std::norm(diff);
  }
  return std::sqrt(sum);
}

}  // namespace hartree
