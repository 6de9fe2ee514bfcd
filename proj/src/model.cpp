#include "qmon/model.hpp"

#include <cmath>
#include <sstream>

namespace qmon {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

PhysicalSystem::PhysicalSystem(double mass_, double omega_, double beta_,
                               double hbar_)
    : mass(mass_), omega(omega_), beta(beta_), hbar(hbar_) {
  require(std::isfinite(mass) && mass > 0.0, "mass must be positive");
  require(std::isfinite(omega) && omega > 0.0, "omega must be positive");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be non-negative");
  require(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
}

MeasurementSetup::MeasurementSetup(double tau_, double delta_a_, int mode_index_)
    : tau(tau_), delta_a(delta_a_), mode_index(mode_index_) {
  require(std::isfinite(tau) && tau > 0.0, "tau must be positive");
  require(delta_a > 0.0 && !std::isnan(delta_a),
          "delta_a must be positive (+inf allowed)");
  require(mode_index >= 1, "mode_index must be a positive integer");
}

ReadoutWaveform make_readout(const MeasurementSetup& setup, double epsilon) {
  require(std::isfinite(epsilon), "epsilon must be finite");
  return ReadoutWaveform{setup, epsilon};
}

SpatialGrid::SpatialGrid(double x_min, double x_max, Index num_points) {
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < 0.0 &&
              0.0 < x_max,
          "grid must satisfy x_min < 0 < x_max");
  require(num_points >= 3 && num_points % 2 == 1,
          "num_points must be odd and at least 3");
  spacing_ = (x_max - x_min) / static_cast<double>(num_points - 1);
  points_.resize(num_points);
  for (Index j = 0; j < num_points; ++j)
    points_[j] = x_min + static_cast<double>(j) * spacing_;
  points_[num_points - 1] = x_max;
}

SpatialGrid SpatialGrid::symmetric(double half_width, Index num_points) {
  require(std::isfinite(half_width) && half_width > 0.0,
          "half_width must be positive");
  require(num_points >= 3 && num_points % 2 == 1,
          "num_points must be odd and at least 3");
  SpatialGrid g;
  const Index c = (num_points - 1) / 2;
  g.spacing_ = half_width / static_cast<double>(c);
  g.points_.resize(num_points);
  g.points_[c] = 0.0;
  for (Index j = 1; j <= c; ++j) {
    const double x = static_cast<double>(j) * g.spacing_;
    g.points_[c + j] = x;
    g.points_[c - j] = -x;
  }
  return g;
}

bool SpatialGrid::approx_equal(const SpatialGrid& other, double tol) const {
  if (num_points() != other.num_points()) return false;
  const double scale = std::max(x_max() - x_min(),
                                other.x_max() - other.x_min());
  return std::abs(x_min() - other.x_min()) <= tol * scale &&
         std::abs(x_max() - other.x_max()) <= tol * scale;
}

Complex inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!a.grid.approx_equal(b.grid))
    throw GridMismatch("inner_product: wave functions live on different grids");
  const Index n = a.values.size();
  Complex s = a.values.conjugate().cwiseProduct(b.values).sum();
  s -= 0.5 * (std::conj(a.values[0]) * b.values[0] +
              std::conj(a.values[n - 1]) * b.values[n - 1]);
  return s * a.grid.spacing();
}

double squared_norm(const WaveFunction& psi) {
  return trapezoid(psi.values.cwiseAbs2(), psi.grid.spacing());
}

double moment(const WaveFunction& psi, int k) {
  const RealVector density = psi.values.cwiseAbs2();
  const RealVector xk = psi.grid.points().array().pow(k).matrix();
  const double num = trapezoid(density.cwiseProduct(xk).eval(), psi.grid.spacing());
  const double den = trapezoid(density, psi.grid.spacing());
  if (den <= 0.0)
    throw NonPositiveVariance("moment: state has non-positive norm");
  return num / den;
}

WaveFunction ground_state(const SpatialGrid& grid, const PhysicalSystem& system) {
  const double a = system.mass * system.omega / system.hbar;
  const double peak = std::pow(a / pi, 0.25);

  // Reject grids whose walls would clip the analytic tail.
  const double edge = std::max(std::abs(grid.x_min()), std::abs(grid.x_max()));
  const double wall = peak * std::exp(-0.5 * a * edge * edge);
  if (wall > 1e-10 * peak) {
    std::ostringstream msg;
    msg << "ground_state: boundary amplitude " << wall / peak
        << " of peak exceeds 1e-10; widen the grid";
    throw GridTooNarrow(msg.str());
  }

  WaveFunction psi{grid, ComplexVector(grid.num_points())};
  for (Index j = 0; j < grid.num_points(); ++j) {
    const double x = grid.point(j);
    psi.values[j] = Complex(peak * std::exp(-0.5 * a * x * x), 0.0);
  }
  psi.values[0] = Complex(0.0, 0.0);
  psi.values[grid.num_points() - 1] = Complex(0.0, 0.0);

  psi.values /= std::sqrt(squared_norm(psi));
  return psi;
}

Complex effective_potential(double x, double t, const PhysicalSystem& system,
                            const MeasurementSetup& setup,
                            const ReadoutWaveform& readout) {
  const double x2 = x * x;
  const double re = 0.5 * system.mass * system.omega * system.omega * x2 +
                    0.25 * system.beta * x2 * x2;
  if (setup.measurement_off()) return Complex(re, 0.0);
  const double d = x - readout.value_at(t);
  const double im =
      -system.hbar / (setup.tau * setup.delta_a * setup.delta_a) * d * d;
  return Complex(re, im);
}

}  // namespace qmon
