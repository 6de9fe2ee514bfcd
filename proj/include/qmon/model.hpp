#pragma once

#include <cmath>

#include "qmon/common.hpp"

namespace qmon {

// Harmonic oscillator with an optional quartic stiffening term,
// V(x) = m omega^2 x^2 / 2 + beta x^4 / 4.
struct PhysicalSystem {
  double mass = 1.0;
  double omega = 1.0;
  double beta = 0.0;
  double hbar = 1.0;

  PhysicalSystem() = default;
  PhysicalSystem(double mass_, double omega_, double beta_, double hbar_);

  // Ground-state length sqrt(hbar / (m omega)), the natural unit of x.
  double quantum_scale() const { return std::sqrt(hbar / (mass * omega)); }

  // beta in units of m^2 omega^3 / hbar, handy for comparing runs.
  double beta_dimensionless() const {
    return beta * hbar / (mass * mass * omega * omega * omega);
  }
};

// Continuous position monitoring over [0, tau] with Gaussian resolution
// delta_a.  delta_a = +infinity switches the monitoring off.
struct MeasurementSetup {
  double tau = 1.0;
  double delta_a = 1.0;
  int mode_index = 1;

  MeasurementSetup() = default;
  MeasurementSetup(double tau_, double delta_a_, int mode_index_);

  bool measurement_off() const { return std::isinf(delta_a); }

  // Frequency of the readout mode, Omega_n = n pi / tau.  Mode n completes
  // n half-periods over the monitoring window, so sin(Omega_n t) vanishes
  // at both ends.
  double mode_frequency() const { return mode_index * pi / tau; }
};

// Candidate measurement record a(t) = epsilon sin(Omega_n t).
struct ReadoutWaveform {
  MeasurementSetup setup;
  double epsilon = 0.0;

  double value_at(double t) const {
    return epsilon * std::sin(setup.mode_frequency() * t);
  }
};

ReadoutWaveform make_readout(const MeasurementSetup& setup, double epsilon);

// Uniform grid with an odd number of points straddling the origin.
// Symmetric grids are built by mirroring, so x_j == -x_{N-1-j} holds
// bit-exactly and parity arguments survive floating point.
class SpatialGrid {
 public:
  SpatialGrid(double x_min, double x_max, Index num_points);

  static SpatialGrid symmetric(double half_width, Index num_points);

  double x_min() const { return points_[0]; }
  double x_max() const { return points_[points_.size() - 1]; }
  Index num_points() const { return points_.size(); }
  double spacing() const { return spacing_; }
  double point(Index j) const { return points_[j]; }
  const RealVector& points() const { return points_; }

  bool approx_equal(const SpatialGrid& other, double tol = 1e-12) const;

 private:
  SpatialGrid() = default;
  RealVector points_;
  double spacing_ = 0.0;
};

struct WaveFunction {
  SpatialGrid grid;
  ComplexVector values;
};

// Trapezoid rule on a uniform grid.
template <typename Derived>
double trapezoid(const Eigen::DenseBase<Derived>& f, double dx) {
  const auto n = f.size();
  double s = f.derived().sum() - 0.5 * (f.derived()[0] + f.derived()[n - 1]);
  return s * dx;
}

// <a|b> by the trapezoid rule; grids must coincide.
Complex inner_product(const WaveFunction& a, const WaveFunction& b);

// <psi|psi> by the trapezoid rule.
double squared_norm(const WaveFunction& psi);

// <x^k> with respect to |psi|^2 (normalized by the squared norm).
double moment(const WaveFunction& psi, int k);

// Harmonic ground state (m omega / pi hbar)^{1/4} exp(-m omega x^2 / 2 hbar)
// sampled on the grid, endpoints clamped to zero, trapezoid-normalized.
// The same state is used as the boundary state when beta > 0.  Throws
// GridTooNarrow if the analytic tail at the walls exceeds 1e-10 of the peak.
WaveFunction ground_state(const SpatialGrid& grid, const PhysicalSystem& system);

// V_eff(x, t) = m omega^2 x^2 / 2 + beta x^4 / 4
//               - i (hbar / (tau delta_a^2)) (x - a(t))^2.
// The imaginary part is <= 0 everywhere and vanishes exactly on the
// readout corridor x = a(t) and when the measurement is off.
Complex effective_potential(double x, double t, const PhysicalSystem& system,
                            const MeasurementSetup& setup,
                            const ReadoutWaveform& readout);

}  // namespace qmon
