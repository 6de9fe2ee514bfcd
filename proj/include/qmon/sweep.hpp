#pragma once

#include <string>
#include <vector>

#include "qmon/common.hpp"
#include "qmon/evolver.hpp"
#include "qmon/model.hpp"

namespace qmon {

// Symmetric readout-amplitude grid: odd point count, mirrored around zero so
// eps_j == -eps_{N-1-j} holds bit-exactly.
class EpsilonGrid {
 public:
  EpsilonGrid(double half_width, Index count);

  Index count() const { return values_.size(); }
  Index center() const { return (values_.size() - 1) / 2; }
  double spacing() const { return spacing_; }
  double value(Index i) const { return values_[i]; }
  const RealVector& values() const { return values_; }

 private:
  RealVector values_;
  double spacing_ = 0.0;
};

// Knobs of the sweep.  The calibration constants translate physical scales
// (quantum scale, squeezed corridor width, packet speed, damping rate) into
// grid and time steps; resolution_scale refines space and time together.
struct SweepSettings {
  Index eps_points = 129;
  double eps_width_factor = 6.0;  // half-width over the analytic width estimate
  double tail_threshold = 1e-6;   // P(edge)/P(0) above this doubles the span
  int max_doublings = 6;
  double resolution_scale = 1.0;

  double base_omega_dt = 0.01;   // dt cap in oscillator (and drive) phase
  // dt cap against the monitored-oscillator frequency |omega_r|.  The
  // kinetic / damping split error per step grows like dt^3 |omega_r|^3, so a
  // plain dt ~ 1/|omega_r| cap accumulates a width bias that grows with the
  // damping strength.  Tightening by another sqrt(|omega_r|/omega), i.e.
  // dt = f / (|omega_r| sqrt(|omega_r|/omega)), keeps the accumulated bias
  // flat across damping strengths; f = 0.2 holds the driven width error near
  // 1.5e-3 of the width itself.
  double dt_rate_factor = 0.2;
  double dt_energy_factor = 0.05;  // dt cap in kinetic phase of the packet
  double dx_per_scale = 0.1;     // dx cap in units of the quantum scale
  double dx_per_squeeze = 0.3;   // dx cap in units of the squeezed width
  double phase_per_dx = 0.35;    // dx cap in packet-momentum phase per point
  double grid_margin = 7.0;      // wall clearance in quantum scales
  double nonlinear_stretch = 1.5;  // extra wall clearance when beta > 0

  // Integrate each readout job in coordinates riding along the tracked
  // packet center instead of the fixed frame.  The translation is an exact
  // change of variables, so both routes converge to the same widths; the
  // moving frame needs no room for the dragged packet and keeps its lattice
  // error common to all eps, which matters at strong squeezing.  Rows where
  // the quartic term is too large for the linear center track fall back to
  // the fixed frame automatically, as does any row with overrides set.
  bool comoving_frame = true;

  // Explicit alternatives to the automatic plan (0 keeps the plan).
  double override_half_width = 0.0;
  Index override_num_points = 0;
  Index override_num_steps = 0;

  int threads = 1;
};

// Space-time discretization chosen for one delta_a row.
struct NumericsPlan {
  double half_width = 0.0;
  Index num_points = 0;
  Index num_steps = 0;
  double dx = 0.0;
  double dt = 0.0;
};

NumericsPlan plan_numerics(const PhysicalSystem& system,
                           const MeasurementSetup& setup,
                           double eps_half_width,
                           const SweepSettings& settings);

// Trajectory of the monitored Gaussian in the linearized (beta = 0) model,
// obtained from the width and center parameters of the ansatz
// psi = exp(A x^2 + B x + C):
//   i hbar A' = -(2 hbar^2 / m) A^2 + m omega^2 / 2 - i g,
//   i hbar B' = -(2 hbar^2 / m) A B + 2 i g a(t).
// B is linear in the drive, so the center for readout amplitude eps is
// eps * c1(t) with c1 from the unit-amplitude drive.  Samples sit on the
// quarter-step grid of the evolution, t_k = k dt / 4: step s of the Cayley
// scheme reads its midpoint at index 4 s + 2 and Simpson-averages each half
// step from the three samples covering it.
struct CenterTrack {
  Index num_steps = 0;
  double dt = 0.0;
  RealVector c1;     // center per unit eps
  RealVector c1dot;  // its velocity, from the ODE right-hand side
  RealVector sigma;  // rms width of the tracked Gaussian
  double theta1 = 0.0;    // gauge phase per eps^2: (m/2) int c1dot^2 dt
  double c1_max = 0.0;    // max |c1| over the window
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

CenterTrack track_linear_center(const PhysicalSystem& system,
                                const MeasurementSetup& setup,
                                const SweepSettings& settings);

// True when the quartic force stays perturbative across the swept corridor,
// so the linear center track still pins the packet near y = 0.  Always true
// for beta = 0.
bool comoving_applicable(const PhysicalSystem& system,
                         const MeasurementSetup& setup, double eps_half_width,
                         const CenterTrack& track);

// Discretization for the moving-frame route.  The grid only has to hold the
// squeezed packet around y = 0, independent of eps, so the spatial step
// follows the squeezed width instead of the swept corridor.
NumericsPlan plan_comoving(const PhysicalSystem& system,
                           const MeasurementSetup& setup,
                           double eps_half_width, const CenterTrack& track,
                           const SweepSettings& settings);

// Moving-frame counterpart of amplitude_profile.  Each job evolves
//   i hbar chi_t = [-hbar^2/(2m) d_yy + U(y + c) + m c'' y
//                   - i g (y + c - a)^2] chi,   c(t) = eps * c1(t),
// which is the exact gauge transform psi = exp(i (m c' y + theta) / hbar) chi
// with theta' = m c'^2 / 2; the final overlap restores the plane-wave factor
// and the accumulated theta(tau).  The inertial tilt m c'' y enters the
// stepper through its exact half-step integrals, momentum kicks
// m (c'(t2) - c'(t1)) / hbar, so the violent initial acceleration at strong
// monitoring costs no time resolution.
std::vector<Amplitude> comoving_profile(const PhysicalSystem& system,
                                        const MeasurementSetup& setup,
                                        const EpsilonGrid& eps,
                                        const NumericsPlan& plan,
                                        const CenterTrack& track, int threads,
                                        EvolveStats* stats = nullptr);

// Everything measured for one delta_a value.
struct SweepResult {
  double delta_a = 0.0;
  std::vector<double> epsilon;
  std::vector<Amplitude> amplitudes;
  RealVector probability;       // Simpson-normalized P(eps)
  double equivalent_width = 0.0;
  double gaussfit_width = 0.0;
  double tail_ratio = 0.0;
  double leak_max = 0.0;
  int eps_doublings = 0;
  NumericsPlan plan;
  double eps_half_width = 0.0;
  bool comoving = false;  // which route produced the row
};

// Overlap <phi2|psi(tau)> for every eps >= 0 on the grid, mirrored to
// negative eps by the parity of the problem (even boundary states, odd
// readout).  Throws what the evolver throws.
std::vector<Amplitude> amplitude_profile(const PhysicalSystem& system,
                                         const MeasurementSetup& setup,
                                         const EpsilonGrid& eps,
                                         const NumericsPlan& plan,
                                         int threads,
                                         EvolveStats* stats = nullptr);

// Normalizes |I(eps)|^2 to unit integral by composite Simpson, working on
// the log scale so rows whose amplitudes underflow still normalize.
RealVector probability_profile(const std::vector<Amplitude>& amplitudes,
                               const EpsilonGrid& eps);

// Width of the distribution defined through its peak, 1 / (sqrt(pi) P(0)):
// exact for a Gaussian, well-defined for any normalized profile.
double equivalent_width(const RealVector& probability, const EpsilonGrid& eps);

// Width from a least-squares Gaussian fit of log P against eps^2 over the
// points above 1e-3 of the peak.  Agreement with equivalent_width measures
// how Gaussian the profile is.
double gaussian_fit_width(const RealVector& probability,
                          const EpsilonGrid& eps);

// Full pipeline for one delta_a: plan, evolve the profile, normalize,
// extract widths, doubling the eps span until the tails are negligible.
SweepResult sweep_row(const PhysicalSystem& system,
                      const MeasurementSetup& setup,
                      const SweepSettings& settings);

struct RowOutcome {
  double delta_a = 0.0;
  bool ok = false;
  SweepResult result;
  std::string error_kind;
  std::string error_message;
  double seconds = 0.0;
};

// Runs sweep_row for every delta_a, recording failures per row instead of
// aborting the scan.
std::vector<RowOutcome> scan_delta_a(const PhysicalSystem& system, double tau,
                                     int mode_index,
                                     const std::vector<double>& deltas,
                                     const SweepSettings& settings);

}  // namespace qmon
