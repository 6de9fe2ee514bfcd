#pragma once

#include "qmon/common.hpp"
#include "qmon/evolver.hpp"
#include "qmon/model.hpp"

namespace qmon {

// Cross-checking machinery, deliberately slow and independent of the Cayley
// scheme: a dense matrix-exponential propagator and an explicit sum over
// lattice paths.  Both are capped to toy sizes by SizeGuard.

// Interior Hamiltonian as a dense matrix, filled entry by entry from the
// same tridiagonal builder the evolver uses.
struct DenseHamiltonian {
  Eigen::MatrixXcd matrix;
};

DenseHamiltonian dense_hamiltonian_at(const SpatialGrid& grid,
                                      const PhysicalSystem& system,
                                      const MeasurementSetup& setup,
                                      const ReadoutWaveform& readout, double t);

// Propagates with U = exp(-i dt H / hbar) per step, potential sampled at
// the step midpoint like the evolver.  Grids above 256 points are refused.
WaveFunction expm_evolve(const WaveFunction& initial,
                         const PhysicalSystem& system,
                         const MeasurementSetup& setup,
                         const ReadoutWaveform& readout,
                         const EvolutionConfig& config);

// Discretization of the monitoring window for the path sum: num_slices time
// slices over [0, tau] on a fixed spatial grid.
struct PathLattice {
  SpatialGrid grid;
  Index num_slices;
  double tau;
};

// Amplitude of one time slice from x_from to x_to: free-particle kernel
// times the midpoint-rule phase and damping of the complex potential,
//   sqrt(m / (2 pi i hbar dt))
//     * exp( (i/hbar) [ m (dx)^2 / (2 dt) - dt V_eff(xbar, t_mid) ] ).
Complex short_time_kernel(double x_from, double x_to, double t_mid, double dt,
                          const PhysicalSystem& system,
                          const MeasurementSetup& setup,
                          const ReadoutWaveform& readout);

// Total amplitude from grid point `from` at t = 0 to `to` at t = tau as an
// explicit sum over every lattice path, one dx measure factor per
// intermediate slice.  Exponential in num_slices; SizeGuard enforces
// num_points <= 21 and num_slices <= 4.
Complex path_sum_kernel(const PathLattice& lattice, Index from, Index to,
                        const PhysicalSystem& system,
                        const MeasurementSetup& setup,
                        const ReadoutWaveform& readout);

// Applies the exhaustive kernel to an initial state sampled on the lattice
// grid, returning the values at t = tau.
ComplexVector path_sum_propagate(const PathLattice& lattice,
                                 const ComplexVector& initial,
                                 const PhysicalSystem& system,
                                 const MeasurementSetup& setup,
                                 const ReadoutWaveform& readout);

}  // namespace qmon
