#pragma once

#include "qmon/common.hpp"
#include "qmon/model.hpp"

namespace qmon {

// cot(z) and csc(z) written in terms of exp(-i z) / exp(+i z) picked by the
// sign of Im(z), so neither overflows when |Im(z)| is large.  For
// Im(z) -> -infinity, cot -> i and csc -> 0.
Complex stable_cot(Complex z);
Complex stable_csc(Complex z);

// Frequency of the monitored linear oscillator after folding the imaginary
// measurement term into the quadratic potential,
//   omega_r^2 = omega^2 - 2 i hbar / (m tau delta_a^2),
// principal square root (Re > 0).  Returns omega exactly when the
// measurement is off.
Complex renormalized_frequency(const PhysicalSystem& system,
                               const MeasurementSetup& setup);

// Closed-form equivalent width of the readout distribution for the linear
// (beta = 0) oscillator with boundary states equal to the ground state.
// Finite for every finite delta_a; +infinity when the measurement is off.
// Throws NonPositiveVariance if the formula ever produced a non-positive
// inverse square (outside the valid parameter domain).
double effective_width_linear(const PhysicalSystem& system,
                              const MeasurementSetup& setup);

// Asymptote of the width for delta_a large compared with the quantum scale:
// the monitoring resolves the readout down to its own resolution, so the
// equivalent width tends to delta_a itself.
double classical_limit(const MeasurementSetup& setup);

// Asymptote for delta_a small compared with the quantum scale,
//   [ (m/hbar)^{3/2} tau^{1/2} Omega^2 delta_a
//     + (m tau / 2 hbar)^2 (Omega^2 - omega^2)^2 delta_a^2 ]^{-1/2},
// growing as measurement back-action dominates.
double quantum_limit(const PhysicalSystem& system,
                     const MeasurementSetup& setup);

// Normalized Gaussian readout distribution of the linear theory,
// P(eps) = exp(-eps^2 / w^2) / (sqrt(pi) w) with w = effective_width_linear.
double gaussian_profile_linear(const PhysicalSystem& system,
                               const MeasurementSetup& setup, double epsilon);

}  // namespace qmon
