#include "qmon/linear_analytic.hpp"

#include <cmath>
#include <limits>

namespace qmon {

namespace {
const Complex I(0.0, 1.0);
}

Complex stable_cot(Complex z) {
  if (z.imag() <= 0.0) {
    const Complex q = std::exp(-2.0 * I * z);  // |q| <= 1
    return I * (1.0 + q) / (1.0 - q);
  }
  const Complex p = std::exp(2.0 * I * z);  // |p| < 1
  return -I * (1.0 + p) / (1.0 - p);
}

Complex stable_csc(Complex z) {
  if (z.imag() <= 0.0) {
    const Complex q = std::exp(-2.0 * I * z);
    return 2.0 * I * std::exp(-I * z) / (1.0 - q);
  }
  const Complex p = std::exp(2.0 * I * z);
  return -2.0 * I * std::exp(I * z) / (1.0 - p);
}

Complex renormalized_frequency(const PhysicalSystem& system,
                               const MeasurementSetup& setup) {
  if (setup.measurement_off()) return Complex(system.omega, 0.0);
  const double rate =
      system.hbar / (system.mass * setup.tau * setup.delta_a * setup.delta_a);
  const Complex wr2 = system.omega * system.omega - 2.0 * I * rate;
  Complex wr = std::sqrt(wr2);
  if (wr.real() < 0.0) wr = -wr;
  return wr;
}

double effective_width_linear(const PhysicalSystem& system,
                              const MeasurementSetup& setup) {
  if (setup.measurement_off()) return std::numeric_limits<double>::infinity();

  const double omega = system.omega;
  const double da2 = setup.delta_a * setup.delta_a;
  const double rate = system.hbar / (system.mass * setup.tau * da2);
  const double Omega = setup.mode_frequency();

  const Complex wr = renormalized_frequency(system, setup);
  // Omega^2 - wr^2 assembled from its exact parts: squaring wr back would
  // leak sqrt roundoff into the gap, which is purely imaginary and small at
  // resonance.  Never zero for finite delta_a.
  const Complex gap(Omega * Omega - omega * omega, 2.0 * rate);
  const Complex z = wr * setup.tau;  // Im(z) < 0

  // 1 - 2 i rate / gap, with the cancellation carried out exactly.
  const Complex term1 =
      (Omega * Omega - omega * omega) / (2.0 * da2 * gap);

  const double sign = (setup.mode_index % 2 == 0) ? 1.0 : -1.0;
  const Complex bracket =
      1.0 - I * (wr / omega) * (stable_cot(z) + sign * stable_csc(z));

  const Complex prefactor =
      4.0 * rate * Omega * Omega / (setup.tau * da2 * omega) / (gap * gap);

  const double inv_sq = 2.0 * (term1 - prefactor / bracket).real();
  if (!(inv_sq > 0.0))
    throw NonPositiveVariance(
        "effective_width_linear: non-positive inverse squared width");
  return 1.0 / std::sqrt(inv_sq);
}

double classical_limit(const MeasurementSetup& setup) { return setup.delta_a; }

double quantum_limit(const PhysicalSystem& system,
                     const MeasurementSetup& setup) {
  const double m_over_h = system.mass / system.hbar;
  const double Omega = setup.mode_frequency();
  const double O2 = Omega * Omega;
  const double w2 = system.omega * system.omega;
  const double da = setup.delta_a;
  const double linear_term =
      std::pow(m_over_h, 1.5) * std::sqrt(setup.tau) * O2 * da;
  const double detune = 0.5 * m_over_h * setup.tau * (O2 - w2);
  const double quadratic_term = detune * detune * da * da;
  const double s = linear_term + quadratic_term;
  if (!(s > 0.0))
    throw NonPositiveVariance("quantum_limit: degenerate parameter set");
  return 1.0 / std::sqrt(s);
}

double gaussian_profile_linear(const PhysicalSystem& system,
                               const MeasurementSetup& setup, double epsilon) {
  const double w = effective_width_linear(system, setup);
  if (std::isinf(w)) return 0.0;
  const double u = epsilon / w;
  return std::exp(-u * u) / (std::sqrt(pi) * w);
}

}  // namespace qmon
