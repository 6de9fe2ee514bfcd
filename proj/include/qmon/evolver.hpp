#pragma once

#include <functional>
#include <limits>

#include "qmon/common.hpp"
#include "qmon/model.hpp"

namespace qmon {

// Time discretization of the monitoring window.  dt = tau / num_steps, and
// construction rejects steps coarser than max_omega_dt oscillator phase per
// step so the Cayley scheme stays in its accurate regime.
struct EvolutionConfig {
  double tau = 0.0;
  Index num_steps = 0;
  double dt = 0.0;

  EvolutionConfig(double tau_, Index num_steps_, const PhysicalSystem& system,
                  double max_omega_dt = 0.05);
};

// Hamiltonian restricted to the interior points of the grid with Dirichlet
// walls: three-point kinetic stencil plus the (complex) effective potential.
// diag[j] corresponds to grid point j + 1; the off-diagonal is constant.
struct TridiagonalHamiltonian {
  ComplexVector diag;
  double off = 0.0;  // -hbar^2 / (2 m dx^2)
};

TridiagonalHamiltonian hamiltonian_at(const SpatialGrid& grid,
                                      const PhysicalSystem& system,
                                      const MeasurementSetup& setup,
                                      const ReadoutWaveform& readout, double t);

// Overlap <a|b> carried both directly and in log form, so amplitudes far
// below the double-precision floor remain usable.  value underflows to zero
// in extreme damping; log_abs stays finite until the state itself is zero.
struct Amplitude {
  Complex value{0.0, 0.0};
  double log_abs = -std::numeric_limits<double>::infinity();
};

Amplitude overlap(const WaveFunction& a, const WaveFunction& b);

// Evolved state kept at unit norm together with the log of the true norm
// that was factored out step by step.
struct TrackedState {
  WaveFunction psi;
  double log_norm = 0.0;
};

Amplitude overlap_tracked(const WaveFunction& a, const TrackedState& b);

struct EvolveStats {
  double leak_max = 0.0;        // worst boundary-region probability fraction
  double min_norm_ratio = 1.0;  // smallest per-step squared-norm ratio
};

// One step from t to t + dt: the damping factor integrated exactly over
// each half step, exp(-g int (x - a(t'))^2 dt' / hbar), on either side of
// the Cayley (Crank-Nicolson) map of the real Hamiltonian,
//   (1 + i dt H0 / 2 hbar) psi' = (1 - i dt H0 / 2 hbar) psi,
// the real potential sampled at the midpoint t + dt/2.  Exactly unitary for
// real potentials, a pointwise contraction when the monitoring is on, and
// second order in dt either way.  Throws NumericalInstability if the squared
// norm grows beyond roundoff.
WaveFunction step(const WaveFunction& psi, double t,
                  const PhysicalSystem& system, const MeasurementSetup& setup,
                  const ReadoutWaveform& readout, const EvolutionConfig& config);

// Full evolution over [0, tau], renormalizing every step and accumulating
// the log of the removed norm.  Throws BoundaryLeak if more than 1e-8 of the
// probability reaches the outer 5% of points on either side of the grid.
TrackedState evolve_tracked(const WaveFunction& initial,
                            const PhysicalSystem& system,
                            const MeasurementSetup& setup,
                            const ReadoutWaveform& readout,
                            const EvolutionConfig& config,
                            EvolveStats* stats = nullptr);

// Diagonal part of one step.  Every x-diagonal factor is integrated exactly
// over its half step: with d(t) the corridor center, the damping well
// Im V = -g (x - d(t))^2 contributes
//   exp(-lam g [(x - center)^2 + spread]),   lam = dt / 2 hbar,
// where center is the time average of d over the half step and spread its
// time variance, so only the genuine commutator with the kinetic term is
// left at second order.  The momentum kicks exp(-i q x) are the exact time
// integrals of the inertial tilt m c'' x of a moving frame over each half
// step, q = m (c'(end) - c'(start)) / hbar, so the delivered momentum is
// right no matter how fast the frame accelerates inside the step.
struct DampingTerm {
  double g = 0.0;
  double center_pre = 0.0;
  double center_post = 0.0;
  double spread_pre = 0.0;
  double spread_post = 0.0;
  double q_pre = 0.0;
  double q_post = 0.0;
};

// Potential supplied by the caller step by step: fill re_pot (one value per
// interior point, in grid order) with Re V at the step's midpoint time and
// return the diagonal terms.  Lets a moving-frame caller evolve with a
// time-dependent real potential while reusing the certified Cayley kernel
// and its norm and leak guards.
using PotentialSampler = std::function<DampingTerm(double t_mid, double* re_pot)>;

TrackedState evolve_tracked_custom(const WaveFunction& initial,
                                   const PhysicalSystem& system,
                                   const EvolutionConfig& config,
                                   const PotentialSampler& sample,
                                   EvolveStats* stats = nullptr);

// Same evolution with the amplitude folded back in.  The returned values
// underflow to zero once the accumulated damping passes the double floor;
// use evolve_tracked where that matters.
WaveFunction evolve(const WaveFunction& initial, const PhysicalSystem& system,
                    const MeasurementSetup& setup,
                    const ReadoutWaveform& readout,
                    const EvolutionConfig& config,
                    EvolveStats* stats = nullptr);

}  // namespace qmon
