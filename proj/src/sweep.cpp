#include "qmon/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "qmon/linear_analytic.hpp"

namespace qmon {

EpsilonGrid::EpsilonGrid(double half_width, Index count) {
  if (!(std::isfinite(half_width) && half_width > 0.0))
    throw ValidationError("EpsilonGrid: half_width must be positive");
  if (count < 3 || count % 2 == 0)
    throw ValidationError("EpsilonGrid: count must be odd and at least 3");
  const Index c = (count - 1) / 2;
  spacing_ = half_width / static_cast<double>(c);
  values_.resize(count);
  values_[c] = 0.0;
  for (Index j = 1; j <= c; ++j) {
    const double e = static_cast<double>(j) * spacing_;
    values_[c + j] = e;
    values_[c - j] = -e;
  }
}

NumericsPlan plan_numerics(const PhysicalSystem& system,
                           const MeasurementSetup& setup,
                           double eps_half_width,
                           const SweepSettings& settings) {
  if (!(std::isfinite(eps_half_width) && eps_half_width > 0.0))
    throw ValidationError("plan_numerics: eps_half_width must be finite and positive");
  const double ell = system.quantum_scale();
  const double omega = system.omega;
  const double Omega = setup.mode_frequency();

  // Squeezed corridor width and complex frequency of the monitored linear
  // oscillator; used as estimates when beta > 0 as well.
  const PhysicalSystem linear(system.mass, system.omega, 0.0, system.hbar);
  const Complex wr = renormalized_frequency(linear, setup);
  const double sigma =
      std::sqrt(system.hbar / (2.0 * system.mass * wr.real()));

  // How fast the packet is dragged along the corridor.  The pull rate kappa
  // follows from the gradient of the damping term across the packet; the
  // first-order-lag response kappa / sqrt(kappa^2 + Omega^2) says how much
  // of the drive speed survives.  The width of the readout distribution is
  // the amplitude range that still matters for the normalization, so the
  // speed scale uses a couple of widths, not the far tail of the eps grid.
  double kappa = 0.0;
  if (!setup.measurement_off())
    kappa = 4.0 * sigma * sigma /
            (setup.tau * setup.delta_a * setup.delta_a);
  const double tracking = kappa / std::hypot(kappa, Omega);
  const double eps_typical =
      std::min(eps_half_width, eps_half_width / settings.eps_width_factor * 2.0);
  const double speed = tracking * Omega * eps_typical + 2.0 * omega * ell;
  const double momentum = system.mass * speed;

  double dx = std::min({settings.dx_per_scale * ell,
                        settings.dx_per_squeeze * sigma,
                        settings.phase_per_dx * system.hbar / momentum});
  if (system.beta > 0.0) dx *= 0.75;
  dx /= settings.resolution_scale;

  double half_width = eps_half_width + settings.grid_margin * ell;
  if (system.beta > 0.0) half_width *= settings.nonlinear_stretch;
  if (settings.override_half_width > 0.0)
    half_width = settings.override_half_width;

  NumericsPlan plan;
  plan.half_width = half_width;
  if (settings.override_num_points > 0) {
    plan.num_points = settings.override_num_points;
  } else {
    Index half_count = static_cast<Index>(std::ceil(half_width / dx));
    plan.num_points = 2 * std::max<Index>(half_count, 1) + 1;
  }
  plan.dx = 2.0 * half_width / static_cast<double>(plan.num_points - 1);

  const double kinetic_energy = 0.5 * system.mass * speed * speed;
  const double rate = std::max(std::abs(wr), omega);
  const double dt =
      std::min({settings.base_omega_dt / omega, settings.base_omega_dt / Omega,
                settings.dt_rate_factor / (rate * std::sqrt(rate / omega)),
                settings.dt_energy_factor * system.hbar / kinetic_energy}) /
      settings.resolution_scale;
  if (settings.override_num_steps > 0)
    plan.num_steps = settings.override_num_steps;
  else
    plan.num_steps = static_cast<Index>(std::ceil(setup.tau / dt));
  plan.num_steps = std::max<Index>(plan.num_steps, 1);
  plan.dt = setup.tau / static_cast<double>(plan.num_steps);
  return plan;
}

namespace {

// Runs run_job(j) for j in [0, jobs) on up to `threads` workers, rethrowing
// the first failure after all workers drain.
void run_eps_jobs(Index jobs, int threads,
                  const std::function<void(Index)>& run_job) {
  const int worker_count =
      std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
  if (worker_count == 1) {
    for (Index j = 0; j < jobs; ++j) run_job(j);
    return;
  }
  std::vector<std::exception_ptr> job_errors(jobs);
  std::atomic<Index> next(0);
  auto worker = [&]() {
    for (;;) {
      const Index j = next.fetch_add(1);
      if (j >= jobs) break;
      try {
        run_job(j);
      } catch (...) {
        job_errors[j] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (Index j = 0; j < jobs; ++j)
    if (job_errors[j]) std::rethrow_exception(job_errors[j]);
}

// Worst case over the per-job evolution stats.
EvolveStats aggregate_stats(const std::vector<EvolveStats>& job_stats) {
  EvolveStats agg;
  for (const auto& s : job_stats) {
    agg.leak_max = std::max(agg.leak_max, s.leak_max);
    agg.min_norm_ratio = std::min(agg.min_norm_ratio, s.min_norm_ratio);
  }
  return agg;
}

}  // namespace

std::vector<Amplitude> amplitude_profile(const PhysicalSystem& system,
                                         const MeasurementSetup& setup,
                                         const EpsilonGrid& eps,
                                         const NumericsPlan& plan,
                                         int threads, EvolveStats* stats) {
  const SpatialGrid grid =
      SpatialGrid::symmetric(plan.half_width, plan.num_points);
  const WaveFunction boundary_state = ground_state(grid, system);
  const EvolutionConfig config(setup.tau, plan.num_steps, system);

  const Index c = eps.center();
  const Index jobs = eps.count() - c;  // eps >= 0, center included
  std::vector<Amplitude> amps(eps.count());
  std::vector<EvolveStats> job_stats(jobs);

  run_eps_jobs(jobs, threads, [&](Index j) {
    const ReadoutWaveform readout = make_readout(setup, eps.value(c + j));
    const TrackedState final_state =
        evolve_tracked(boundary_state, system, setup, readout, config,
                       &job_stats[j]);
    const Amplitude amp = overlap_tracked(boundary_state, final_state);
    amps[c + j] = amp;
    amps[c - j] = amp;  // I(-eps) = I(eps) by parity
  });

  if (stats) *stats = aggregate_stats(job_stats);
  return amps;
}

namespace {

// Composite Simpson weights dEps/3 * [1, 4, 2, ..., 2, 4, 1].
double simpson(const RealVector& f, double h) {
  const Index n = f.size();
  double s = f[0] + f[n - 1];
  for (Index i = 1; i < n - 1; ++i) s += f[i] * ((i % 2 == 1) ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Spatial step of the moving-frame grid in units of the narrowest tracked
// width.  Eight cells across the packet holds the second-order lattice bias
// on the row width to a few parts in 1e4 at the strongest damping in scope;
// most of the pointwise bias is common to all eps and divides out of the
// normalized profile.
constexpr double kComovingDxPerSigma = 0.125;

// Quasi-static displacement the quartic force imparts at excursion x_max:
// beta x^3 against the stiffness m |omega_r|^2 of the monitored oscillator.
// The linear center track absorbs everything below this residual.
double quartic_drift(const PhysicalSystem& system,
                     const MeasurementSetup& setup, double x_max) {
  const PhysicalSystem linear(system.mass, system.omega, 0.0, system.hbar);
  const Complex wr = renormalized_frequency(linear, setup);
  return system.beta * x_max * x_max * x_max /
         (system.mass * std::norm(wr));
}

}  // namespace

CenterTrack track_linear_center(const PhysicalSystem& system,
                                const MeasurementSetup& setup,
                                const SweepSettings& settings) {
  if (setup.measurement_off())
    throw ValidationError(
        "track_linear_center: needs a finite delta_a, the unmonitored packet "
        "is not dragged");
  const double m = system.mass;
  const double hbar = system.hbar;
  const double omega = system.omega;
  const double Omega = setup.mode_frequency();
  const double g = hbar / (setup.tau * setup.delta_a * setup.delta_a);

  const PhysicalSystem linear(m, omega, 0.0, system.hbar);
  const Complex wr = renormalized_frequency(linear, setup);

  // Step caps mirror plan_numerics with the drag energy replaced by the
  // packet's internal kinetic scale: the frame removes the drag.  The full
  // |omega_r| bounds both the damping rate and the squeeze oscillation.
  const double sigma_inf = std::sqrt(hbar / (2.0 * m * wr.real()));
  const double sigma0 = std::sqrt(hbar / (2.0 * m * omega));
  const double sigma_lo = std::min(sigma_inf, sigma0);
  const double rate = std::max(std::abs(wr), omega);
  const double dt =
      std::min({settings.base_omega_dt / omega, settings.base_omega_dt / Omega,
                settings.dt_rate_factor / (rate * std::sqrt(rate / omega)),
                settings.dt_energy_factor * 2.0 * m * sigma_lo * sigma_lo /
                    hbar}) /
      settings.resolution_scale;

  CenterTrack track;
  track.num_steps =
      std::max<Index>(1, static_cast<Index>(std::ceil(setup.tau / dt)));
  track.dt = setup.tau / static_cast<double>(track.num_steps);

  const Index samples = 4 * track.num_steps + 1;
  track.c1.resize(samples);
  track.c1dot.resize(samples);
  track.sigma.resize(samples);

  // Width and center parameters of the Gaussian ansatz under the monitored
  // linear evolution, driven at unit readout amplitude.  A is Riccati and
  // attracted to -m omega_r / (2 hbar); B rides on top of it linearly.
  const Complex iu(0.0, 1.0);
  const ReadoutWaveform drive = make_readout(setup, 1.0);
  const auto A_rhs = [&](const Complex& A) {
    return ((-2.0 * hbar * hbar / m) * A * A + 0.5 * m * omega * omega -
            iu * g) /
           (iu * hbar);
  };
  const auto B_rhs = [&](const Complex& A, const Complex& B, double t) {
    return ((-2.0 * hbar * hbar / m) * A * B +
            2.0 * iu * g * drive.value_at(t)) /
           (iu * hbar);
  };

  const double h = 0.25 * track.dt;
  Complex A(-m * omega / (2.0 * hbar), 0.0);
  Complex B(0.0, 0.0);
  for (Index k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) * h;
    const double reA = A.real();
    // Contraction keeps Re A < 0 for the exact flow; a sign loss here means
    // the integration step failed.
    if (!(reA < 0.0))
      throw NumericalInstability(
          "track_linear_center: width parameter lost confinement");
    const Complex Ad = A_rhs(A);
    const Complex Bd = B_rhs(A, B, t);
    track.sigma[k] = 0.5 / std::sqrt(-reA);
    track.c1[k] = -0.5 * B.real() / reA;
    track.c1dot[k] =
        -0.5 * (Bd.real() * reA - B.real() * Ad.real()) / (reA * reA);
    if (k + 1 == samples) break;

    const Complex A2 = A + 0.5 * h * Ad;
    const Complex B2 = B + 0.5 * h * Bd;
    const Complex Ad2 = A_rhs(A2);
    const Complex Bd2 = B_rhs(A2, B2, t + 0.5 * h);
    const Complex A3 = A + 0.5 * h * Ad2;
    const Complex B3 = B + 0.5 * h * Bd2;
    const Complex Ad3 = A_rhs(A3);
    const Complex Bd3 = B_rhs(A3, B3, t + 0.5 * h);
    const Complex A4 = A + h * Ad3;
    const Complex B4 = B + h * Bd3;
    const Complex Ad4 = A_rhs(A4);
    const Complex Bd4 = B_rhs(A4, B4, t + h);
    A += (h / 6.0) * (Ad + 2.0 * Ad2 + 2.0 * Ad3 + Ad4);
    B += (h / 6.0) * (Bd + 2.0 * Bd2 + 2.0 * Bd3 + Bd4);
  }

  RealVector v2(samples);
  for (Index k = 0; k < samples; ++k) v2[k] = track.c1dot[k] * track.c1dot[k];
  track.theta1 = 0.5 * m * simpson(v2, h);

  track.c1_max = track.c1.cwiseAbs().maxCoeff();
  track.sigma_min = track.sigma.minCoeff();
  track.sigma_max = track.sigma.maxCoeff();
  return track;
}

bool comoving_applicable(const PhysicalSystem& system,
                         const MeasurementSetup& setup, double eps_half_width,
                         const CenterTrack& track) {
  if (setup.measurement_off()) return false;
  if (system.beta <= 0.0) return true;
  // The frame helps only while the quartic pull is a perturbation on the
  // tracked center across the whole swept corridor; past that the linear
  // track no longer pins the packet and the fixed frame is the honest route.
  const double drift =
      quartic_drift(system, setup, eps_half_width * track.c1_max);
  return drift <= 0.25 * track.sigma_min;
}

NumericsPlan plan_comoving(const PhysicalSystem& system,
                           const MeasurementSetup& setup,
                           double eps_half_width, const CenterTrack& track,
                           const SweepSettings& settings) {
  if (!(std::isfinite(eps_half_width) && eps_half_width > 0.0))
    throw ValidationError(
        "plan_comoving: eps_half_width must be finite and positive");
  const double ell = system.quantum_scale();

  double dx = std::min(settings.dx_per_scale * ell,
                       kComovingDxPerSigma * track.sigma_min);
  dx /= settings.resolution_scale;

  // The packet stays near y = 0 for every eps, so the walls only need the
  // usual clearance around the wider of the quantum scale and the tracked
  // width, plus room for the small quartic drift the track leaves behind.
  double half_width = settings.grid_margin * std::max(ell, track.sigma_max);
  if (system.beta > 0.0)
    half_width +=
        2.0 * quartic_drift(system, setup, eps_half_width * track.c1_max);

  NumericsPlan plan;
  plan.half_width = half_width;
  const Index half_count = static_cast<Index>(std::ceil(half_width / dx));
  plan.num_points = 2 * std::max<Index>(half_count, 1) + 1;
  plan.dx = 2.0 * half_width / static_cast<double>(plan.num_points - 1);
  plan.num_steps = track.num_steps;
  plan.dt = track.dt;
  return plan;
}

std::vector<Amplitude> comoving_profile(const PhysicalSystem& system,
                                        const MeasurementSetup& setup,
                                        const EpsilonGrid& eps,
                                        const NumericsPlan& plan,
                                        const CenterTrack& track, int threads,
                                        EvolveStats* stats) {
  if (plan.num_steps != track.num_steps)
    throw ValidationError("comoving_profile: plan and track disagree on steps");
  const SpatialGrid grid =
      SpatialGrid::symmetric(plan.half_width, plan.num_points);
  const WaveFunction boundary_state = ground_state(grid, system);
  const EvolutionConfig config(setup.tau, plan.num_steps, system);

  const double m = system.mass;
  const double hbar = system.hbar;
  const double omega = system.omega;
  const double beta = system.beta;
  const double g = hbar / (setup.tau * setup.delta_a * setup.delta_a);

  // Boundary state again, analytic this time, for the probe shifted to the
  // final center.  Its normalization differs from the grid-normalized copy
  // by an eps-independent factor within roundoff of 1, which divides out of
  // the normalized profile.
  const double aw = m * omega / hbar;
  const double peak = std::pow(aw / pi, 0.25);

  const Index c = eps.center();
  const Index jobs = eps.count() - c;
  std::vector<Amplitude> amps(eps.count());
  std::vector<EvolveStats> job_stats(jobs);
  const Index n = grid.num_points();
  const Index interior = n - 2;

  run_eps_jobs(jobs, threads, [&](Index j) {
    const double e = eps.value(c + j);
    const ReadoutWaveform readout = make_readout(setup, e);

    // Real potential at the step midpoint: the well sampled at the displaced
    // point.  The damping well rides the corridor offset d = a - c, whose
    // half-step time average and variance come from Simpson on the three
    // quarter-step track samples covering each half; the inertial tilt
    // m c'' y becomes the pair of momentum kicks, each the exact integral of
    // the tilt over its half step.
    const auto sample = [&](double t_mid, double* re_pot) {
      const Index k =
          static_cast<Index>(std::llround(t_mid / (0.25 * plan.dt)));
      const double cc = e * track.c1[k];
      for (Index i = 0; i < interior; ++i) {
        const double y = grid.point(i + 1);
        const double xs = y + cc;
        const double xs2 = xs * xs;
        re_pot[i] = 0.5 * m * omega * omega * xs2 + 0.25 * beta * xs2 * xs2;
      }
      double d[5];
      for (int q = -2; q <= 2; ++q) {
        const double tq = static_cast<double>(k + q) * 0.25 * plan.dt;
        d[q + 2] = readout.value_at(tq) - e * track.c1[k + q];
      }
      DampingTerm well;
      well.g = g;
      well.center_pre = (d[0] + 4.0 * d[1] + d[2]) / 6.0;
      well.center_post = (d[2] + 4.0 * d[3] + d[4]) / 6.0;
      const double m2_pre =
          (d[0] * d[0] + 4.0 * d[1] * d[1] + d[2] * d[2]) / 6.0;
      const double m2_post =
          (d[2] * d[2] + 4.0 * d[3] * d[3] + d[4] * d[4]) / 6.0;
      well.spread_pre =
          std::max(0.0, m2_pre - well.center_pre * well.center_pre);
      well.spread_post =
          std::max(0.0, m2_post - well.center_post * well.center_post);
      well.q_pre = m * e * (track.c1dot[k] - track.c1dot[k - 2]) / hbar;
      well.q_post = m * e * (track.c1dot[k + 2] - track.c1dot[k]) / hbar;
      return well;
    };

    const TrackedState final_state = evolve_tracked_custom(
        boundary_state, system, config, sample, &job_stats[j]);

    // Undo the gauge at t = tau.  In lab coordinates
    //   psi(x) = exp(i (m c'(tau) y + theta(tau)) / hbar) chi(y),
    // x = y + c(tau), so the boundary overlap becomes exp(i theta / hbar)
    // times the integral of phi(y + c)* exp(i k y) chi(y) with
    // k = m c'(tau) / hbar.  The probe absorbs the shift and the plane wave
    // so overlap_tracked keeps the log bookkeeping.
    const double c_tau = e * track.c1[4 * track.num_steps];
    const double k_wave = m * e * track.c1dot[4 * track.num_steps] / hbar;
    WaveFunction probe{grid, ComplexVector(n)};
    for (Index i = 0; i < n; ++i) {
      const double y = grid.point(i);
      const double x = y + c_tau;
      const double mag = peak * std::exp(-0.5 * aw * x * x);
      const double ph = k_wave * y;
      probe.values[i] = Complex(mag * std::cos(ph), -mag * std::sin(ph));
    }
    probe.values[0] = Complex(0.0, 0.0);
    probe.values[n - 1] = Complex(0.0, 0.0);

    Amplitude amp = overlap_tracked(probe, final_state);
    const double theta = e * e * track.theta1 / hbar;
    amp.value *= Complex(std::cos(theta), std::sin(theta));
    amps[c + j] = amp;
    amps[c - j] = amp;  // exact mirror, as in the fixed frame
  });

  if (stats) *stats = aggregate_stats(job_stats);
  return amps;
}

RealVector probability_profile(const std::vector<Amplitude>& amplitudes,
                               const EpsilonGrid& eps) {
  if (static_cast<Index>(amplitudes.size()) != eps.count())
    throw ValidationError("probability_profile: amplitude count mismatch");

  // Work with log |I|^2 relative to its maximum, so a uniformly tiny
  // profile normalizes as well as an O(1) one.
  const Index n = eps.count();
  RealVector log2(n);
  double top = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    log2[i] = 2.0 * amplitudes[i].log_abs;
    top = std::max(top, log2[i]);
  }
  if (!std::isfinite(top))
    throw DegenerateProfile("probability_profile: all amplitudes vanish");

  RealVector p(n);
  for (Index i = 0; i < n; ++i) p[i] = std::exp(log2[i] - top);
  const double q = simpson(p, eps.spacing());
  if (!(q > 0.0))
    throw DegenerateProfile("probability_profile: profile integrates to zero");
  p /= q;
  return p;
}

double equivalent_width(const RealVector& probability,
                        const EpsilonGrid& eps) {
  if (probability.size() != eps.count())
    throw ValidationError("equivalent_width: profile size mismatch");
  const double peak = probability[eps.center()];
  if (!(peak > 0.0))
    throw ZeroPeak("equivalent_width: P(0) is not positive");
  return 1.0 / (std::sqrt(pi) * peak);
}

double gaussian_fit_width(const RealVector& probability,
                          const EpsilonGrid& eps) {
  if (probability.size() != eps.count())
    throw ValidationError("gaussian_fit_width: profile size mismatch");
  const double peak = probability[eps.center()];
  if (!(peak > 0.0))
    throw ZeroPeak("gaussian_fit_width: P(0) is not positive");

  // Least squares of log P against eps^2 over the part of the profile that
  // stands clear of the numerical floor.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
  Index used = 0;
  for (Index i = 0; i < eps.count(); ++i) {
    const double p = probability[i];
    if (!(p > 1e-3 * peak)) continue;
    const double u = eps.value(i) * eps.value(i);
    const double y = std::log(p);
    s0 += 1.0;
    s1 += u;
    s2 += u * u;
    t0 += y;
    t1 += u * y;
    ++used;
  }
  if (used < 5)
    throw FitDiverged("gaussian_fit_width: fewer than 5 usable points");
  const double det = s0 * s2 - s1 * s1;
  if (!(det > 0.0))
    throw FitDiverged("gaussian_fit_width: degenerate normal equations");
  const double slope = (s0 * t1 - s1 * t0) / det;
  if (!(slope < 0.0))
    throw FitDiverged("gaussian_fit_width: profile does not decay");
  return 1.0 / std::sqrt(-slope);
}

SweepResult sweep_row(const PhysicalSystem& system,
                      const MeasurementSetup& setup,
                      const SweepSettings& settings) {
  if (setup.measurement_off())
    throw ValidationError(
        "sweep_row: delta_a = +inf has no finite readout distribution");

  // The linear closed form anchors the eps span; the true nonlinear width
  // is narrower (stiffer confinement), so the span only gains margin.
  const PhysicalSystem linear(system.mass, system.omega, 0.0, system.hbar);
  const double w_est = effective_width_linear(linear, setup);
  double half = settings.eps_width_factor * w_est;

  // The center track is per unit eps, so one integration serves every
  // doubling attempt.  Overrides pin the fixed-frame discretization and
  // force that route.
  const bool overrides_set = settings.override_half_width > 0.0 ||
                             settings.override_num_points > 0 ||
                             settings.override_num_steps > 0;
  CenterTrack track;
  bool have_track = false;
  if (settings.comoving_frame && !overrides_set) {
    track = track_linear_center(system, setup, settings);
    have_track = true;
  }

  SweepResult row;
  row.delta_a = setup.delta_a;
  for (int attempt = 0;; ++attempt) {
    const EpsilonGrid eps(half, settings.eps_points);
    const bool frame =
        have_track && comoving_applicable(system, setup, half, track);
    const NumericsPlan plan =
        frame ? plan_comoving(system, setup, half, track, settings)
              : plan_numerics(system, setup, half, settings);
    EvolveStats stats;
    std::vector<Amplitude> amps =
        frame ? comoving_profile(system, setup, eps, plan, track,
                                 settings.threads, &stats)
              : amplitude_profile(system, setup, eps, plan, settings.threads,
                                  &stats);
    RealVector p = probability_profile(amps, eps);
    row.comoving = frame;

    const double peak = p[eps.center()];
    const double tail = std::max(p[0], p[eps.count() - 1]) /
                        (peak > 0.0 ? peak : 1.0);
    row.tail_ratio = tail;
    row.leak_max = stats.leak_max;
    row.eps_doublings = attempt;
    row.plan = plan;
    row.eps_half_width = half;
    if (tail <= settings.tail_threshold || attempt >= settings.max_doublings) {
      if (tail > settings.tail_threshold) {
        std::ostringstream msg;
        msg << "sweep_row: tail ratio " << tail << " still above "
            << settings.tail_threshold << " after " << attempt
            << " doublings";
        throw DegenerateProfile(msg.str());
      }
      row.epsilon.assign(eps.values().data(),
                         eps.values().data() + eps.count());
      row.amplitudes = std::move(amps);
      row.probability = std::move(p);
      row.equivalent_width = equivalent_width(row.probability, eps);
      row.gaussfit_width = gaussian_fit_width(row.probability, eps);
      return row;
    }
    half *= 2.0;
  }
}

namespace {

std::string classify_error(const std::exception& e) {
  if (dynamic_cast<const GridTooNarrow*>(&e)) return "GridTooNarrow";
  if (dynamic_cast<const GridMismatch*>(&e)) return "GridMismatch";
  if (dynamic_cast<const NumericalInstability*>(&e))
    return "NumericalInstability";
  if (dynamic_cast<const BoundaryLeak*>(&e)) return "BoundaryLeak";
  if (dynamic_cast<const NonPositiveVariance*>(&e))
    return "NonPositiveVariance";
  if (dynamic_cast<const ZeroPeak*>(&e)) return "ZeroPeak";
  if (dynamic_cast<const FitDiverged*>(&e)) return "FitDiverged";
  if (dynamic_cast<const DegenerateProfile*>(&e)) return "DegenerateProfile";
  if (dynamic_cast<const SizeGuard*>(&e)) return "SizeGuard";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  return "Error";
}

}  // namespace

std::vector<RowOutcome> scan_delta_a(const PhysicalSystem& system, double tau,
                                     int mode_index,
                                     const std::vector<double>& deltas,
                                     const SweepSettings& settings) {
  std::vector<RowOutcome> rows;
  rows.reserve(deltas.size());
  for (double da : deltas) {
    RowOutcome out;
    out.delta_a = da;
    const auto start = std::chrono::steady_clock::now();
    try {
      const MeasurementSetup setup(tau, da, mode_index);
      out.result = sweep_row(system, setup, settings);
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error_kind = classify_error(e);
      out.error_message = e.what();
    }
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    rows.push_back(std::move(out));
  }
  return rows;
}

}  // namespace qmon
