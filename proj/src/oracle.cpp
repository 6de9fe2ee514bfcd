#include "qmon/oracle.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace qmon {

namespace {

void guard(bool ok, const std::string& msg) {
  if (!ok) throw SizeGuard(msg);
}

}  // namespace

DenseHamiltonian dense_hamiltonian_at(const SpatialGrid& grid,
                                      const PhysicalSystem& system,
                                      const MeasurementSetup& setup,
                                      const ReadoutWaveform& readout,
                                      double t) {
  guard(grid.num_points() <= 256,
        "dense_hamiltonian_at: grids above 256 points are evolver territory");
  const TridiagonalHamiltonian tri =
      hamiltonian_at(grid, system, setup, readout, t);
  const Index m = tri.diag.size();
  DenseHamiltonian h;
  h.matrix = Eigen::MatrixXcd::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    h.matrix(j, j) = tri.diag[j];
    if (j + 1 < m) {
      h.matrix(j, j + 1) = tri.off;
      h.matrix(j + 1, j) = tri.off;
    }
  }
  return h;
}

WaveFunction expm_evolve(const WaveFunction& initial,
                         const PhysicalSystem& system,
                         const MeasurementSetup& setup,
                         const ReadoutWaveform& readout,
                         const EvolutionConfig& config) {
  const SpatialGrid& grid = initial.grid;
  guard(grid.num_points() <= 256,
        "expm_evolve: grids above 256 points are evolver territory");
  const Index m = grid.num_points() - 2;
  Eigen::VectorXcd psi = initial.values.segment(1, m);
  const Complex minus_i_dt(0.0, -config.dt / system.hbar);
  for (Index s = 0; s < config.num_steps; ++s) {
    const double t_mid = (static_cast<double>(s) + 0.5) * config.dt;
    const DenseHamiltonian h =
        dense_hamiltonian_at(grid, system, setup, readout, t_mid);
    const Eigen::MatrixXcd u = (minus_i_dt * h.matrix).exp();
    psi = u * psi;
  }
  WaveFunction out{grid, ComplexVector::Zero(grid.num_points())};
  out.values.segment(1, m) = psi;
  return out;
}

Complex short_time_kernel(double x_from, double x_to, double t_mid, double dt,
                          const PhysicalSystem& system,
                          const MeasurementSetup& setup,
                          const ReadoutWaveform& readout) {
  const Complex i(0.0, 1.0);
  const Complex norm =
      std::sqrt(system.mass / (2.0 * pi * i * system.hbar * dt));
  const double dx = x_to - x_from;
  const double xbar = 0.5 * (x_from + x_to);
  const Complex v = effective_potential(xbar, t_mid, system, setup, readout);
  const Complex phase =
      i / system.hbar * (0.5 * system.mass * dx * dx / dt - dt * v);
  return norm * std::exp(phase);
}

namespace {

// Recursive enumeration: product of slice kernels over every choice of the
// intermediate points.  Depth is at most num_slices - 1.
Complex sum_paths(const PathLattice& lattice, Index slice, double x_prev,
                  Index to, double dt, const PhysicalSystem& system,
                  const MeasurementSetup& setup,
                  const ReadoutWaveform& readout) {
  const double t_mid = (static_cast<double>(slice) + 0.5) * dt;
  if (slice + 1 == lattice.num_slices) {
    return short_time_kernel(x_prev, lattice.grid.point(to), t_mid, dt, system,
                             setup, readout);
  }
  Complex acc(0.0, 0.0);
  for (Index j = 0; j < lattice.grid.num_points(); ++j) {
    const double xj = lattice.grid.point(j);
    const Complex k =
        short_time_kernel(x_prev, xj, t_mid, dt, system, setup, readout);
    acc += k * sum_paths(lattice, slice + 1, xj, to, dt, system, setup, readout);
  }
  return acc * lattice.grid.spacing();
}

void check_lattice(const PathLattice& lattice) {
  guard(lattice.grid.num_points() <= 21,
        "path_sum: lattice wider than 21 points");
  guard(lattice.num_slices >= 1 && lattice.num_slices <= 4,
        "path_sum: more than 4 time slices");
  if (!(lattice.tau > 0.0))
    throw ValidationError("path_sum: tau must be positive");
}

}  // namespace

Complex path_sum_kernel(const PathLattice& lattice, Index from, Index to,
                        const PhysicalSystem& system,
                        const MeasurementSetup& setup,
                        const ReadoutWaveform& readout) {
  check_lattice(lattice);
  const double dt = lattice.tau / static_cast<double>(lattice.num_slices);
  return sum_paths(lattice, 0, lattice.grid.point(from), to, dt, system, setup,
                   readout);
}

ComplexVector path_sum_propagate(const PathLattice& lattice,
                                 const ComplexVector& initial,
                                 const PhysicalSystem& system,
                                 const MeasurementSetup& setup,
                                 const ReadoutWaveform& readout) {
  check_lattice(lattice);
  const Index n = lattice.grid.num_points();
  if (initial.size() != n)
    throw GridMismatch("path_sum_propagate: state size does not match lattice");
  ComplexVector out = ComplexVector::Zero(n);
  for (Index to = 0; to < n; ++to) {
    Complex acc(0.0, 0.0);
    for (Index from = 0; from < n; ++from)
      acc += path_sum_kernel(lattice, from, to, system, setup, readout) *
             initial[from];
    out[to] = acc * lattice.grid.spacing();
  }
  return out;
}

}  // namespace qmon
