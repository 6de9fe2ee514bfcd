#include "qmon/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "qmon/linear_analytic.hpp"
#include "qmon/svg.hpp"

namespace qmon {

namespace {

// 12 significant digits, enough to make re-runs byte-comparable without
// printing raw binary.
std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string plain(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + p.string());
  return out;
}

double analytic_width(const PhysicalSystem& system, double tau,
                      int mode_index, double delta_a) {
  const PhysicalSystem linear(system.mass, system.omega, 0.0, system.hbar);
  return effective_width_linear(linear,
                                MeasurementSetup(tau, delta_a, mode_index));
}

void write_scan_csv(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::vector<RowOutcome>& rows) {
  std::ofstream out = open_out(path);
  out << "delta_a,delta_a_eff_equivalent,delta_a_eff_gaussfit,analytic_linear,"
         "classical_limit,quantum_limit,leak_max,tail_ratio,status\n";
  const double nan = std::nan("");
  for (const auto& row : rows) {
    // Rows with delta_a = inf (measurement switched off) have no analytic
    // comparison: the limits are degenerate there and would throw.
    const bool finite = std::isfinite(row.delta_a);
    const MeasurementSetup setup(cfg.tau, finite ? row.delta_a : 1.0,
                                 cfg.mode_index);
    out << sci(row.delta_a) << ','
        << sci(row.ok ? row.result.equivalent_width : nan) << ','
        << sci(row.ok ? row.result.gaussfit_width : nan) << ','
        << sci(finite ? analytic_width(cfg.system, cfg.tau, cfg.mode_index,
                                       row.delta_a)
                      : nan)
        << ',' << sci(finite ? classical_limit(setup) : nan) << ','
        << sci(finite ? quantum_limit(cfg.system, setup) : nan) << ','
        << sci(row.ok ? row.result.leak_max : nan) << ','
        << sci(row.ok ? row.result.tail_ratio : nan) << ','
        << (row.ok ? "ok" : "failed:" + row.error_kind) << '\n';
  }
}

void write_profile_csv(const std::filesystem::path& path,
                       const SweepResult& row) {
  std::ofstream out = open_out(path);
  out << "epsilon,re_I,im_I,P\n";
  for (size_t i = 0; i < row.epsilon.size(); ++i) {
    out << sci(row.epsilon[i]) << ',' << sci(row.amplitudes[i].value.real())
        << ',' << sci(row.amplitudes[i].value.imag()) << ','
        << sci(row.probability[static_cast<Index>(i)]) << '\n';
  }
}

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::vector<RowOutcome>& rows, int threads,
                    double total_seconds) {
  std::ofstream out = open_out(path);
  out << "mass=" << plain(cfg.system.mass) << '\n'
      << "omega=" << plain(cfg.system.omega) << '\n'
      << "beta=" << plain(cfg.system.beta) << '\n'
      << "hbar=" << plain(cfg.system.hbar) << '\n'
      << "quantum_scale=" << plain(cfg.system.quantum_scale()) << '\n'
      << "tau=" << plain(cfg.tau) << '\n'
      << "mode_index=" << cfg.mode_index << '\n'
      << "eps_points=" << cfg.numerics.eps_points << '\n'
      << "eps_width_factor=" << plain(cfg.numerics.eps_width_factor) << '\n'
      << "omega_dt=" << plain(cfg.numerics.base_omega_dt) << '\n'
      << "resolution_scale=" << plain(cfg.numerics.resolution_scale) << '\n'
      << "threads=" << threads << '\n'
      << "row_count=" << rows.size() << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string p = "row_" + std::to_string(i) + "_";
    out << p << "delta_a=" << plain(row.delta_a) << '\n'
        << p << "status=" << (row.ok ? "ok" : "failed:" + row.error_kind)
        << '\n';
    if (row.ok) {
      out << p << "grid_half_width=" << plain(row.result.plan.half_width)
          << '\n'
          << p << "grid_points=" << row.result.plan.num_points << '\n'
          << p << "dx=" << plain(row.result.plan.dx) << '\n'
          << p << "time_steps=" << row.result.plan.num_steps << '\n'
          << p << "dt=" << plain(row.result.plan.dt) << '\n'
          << p << "eps_half_width=" << plain(row.result.eps_half_width) << '\n'
          << p << "eps_doublings=" << row.result.eps_doublings << '\n';
    } else {
      out << p << "error=" << row.error_message << '\n';
    }
    out << p << "seconds=" << plain(row.seconds) << '\n';
  }
  out << "total_seconds=" << plain(total_seconds) << '\n';
}

void write_scan_svg(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::vector<RowOutcome>& rows) {
  const double ell = cfg.system.quantum_scale();
  LogLogPlot plot("equivalent width of the readout distribution",
                  "delta_a / quantum scale", "width / quantum scale");

  PlotSeries numeric;
  numeric.name = "swept (equivalent width)";
  numeric.color = "#000000";
  numeric.line = false;
  numeric.markers = true;
  double lo = 0.0, hi = 0.0;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    numeric.x.push_back(row.delta_a / ell);
    numeric.y.push_back(row.result.equivalent_width / ell);
    lo = (lo == 0.0) ? row.delta_a : std::min(lo, row.delta_a);
    hi = std::max(hi, row.delta_a);
  }
  if (lo == 0.0) { lo = 0.01 * ell; hi = 100.0 * ell; }
  // A single swept point still deserves some analytic context around it.
  if (!(hi > lo)) { lo /= 4.0; hi *= 4.0; }

  PlotSeries analytic;
  analytic.name = "linear closed form";
  analytic.color = "#1f6fb4";
  PlotSeries classical;
  classical.name = "classical limit";
  classical.color = "#444444";
  classical.dash = "8 5";
  PlotSeries quantum;
  quantum.name = "quantum limit";
  quantum.color = "#b03030";
  quantum.dash = "2 3 7 3";
  const std::vector<double> dense = log_spaced(lo, hi, 200);
  for (double da : dense) {
    const MeasurementSetup setup(cfg.tau, da, cfg.mode_index);
    analytic.x.push_back(da / ell);
    analytic.y.push_back(
        analytic_width(cfg.system, cfg.tau, cfg.mode_index, da) / ell);
    classical.x.push_back(da / ell);
    classical.y.push_back(classical_limit(setup) / ell);
    quantum.x.push_back(da / ell);
    quantum.y.push_back(quantum_limit(cfg.system, setup) / ell);
  }
  plot.add_series(std::move(analytic));
  plot.add_series(std::move(classical));
  plot.add_series(std::move(quantum));
  plot.add_series(std::move(numeric));
  open_out(path) << plot.render();
}

}  // namespace

int run_experiment(const RunConfig& config, const std::string& out_dir,
                   std::ostream* log) {
  SweepSettings settings = config.numerics;
  int threads = config.parallel;
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  settings.threads = threads;

  const auto start = std::chrono::steady_clock::now();
  std::vector<RowOutcome> rows;
  rows.reserve(config.delta_a.size());
  for (double da : config.delta_a) {
    std::vector<RowOutcome> one =
        scan_delta_a(config.system, config.tau, config.mode_index, {da},
                     settings);
    rows.push_back(std::move(one.front()));
    if (log) {
      const auto& row = rows.back();
      *log << "delta_a = " << row.delta_a;
      if (row.ok)
        *log << "  width = " << row.result.equivalent_width;
      else
        *log << "  FAILED (" << row.error_kind << ")";
      *log << "  [" << row.seconds << " s]\n" << std::flush;
    }
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_scan_csv(dir / "scan.csv", config, rows);
  if (config.output.profiles) {
    for (size_t i = 0; i < rows.size(); ++i)
      if (rows[i].ok)
        write_profile_csv(dir / ("profile-" + std::to_string(i) + ".csv"),
                          rows[i].result);
  }
  write_manifest(dir / "manifest.txt", config, rows, threads, total);
  if (config.output.plots) write_scan_svg(dir / "scan.svg", config, rows);

  for (const auto& row : rows)
    if (!row.ok) return 2;
  return 0;
}

int run_analytic(const RunConfig& config, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream out = open_out(dir / "analytic.csv");
  out << "delta_a,delta_a_eff_analytic,classical_limit,quantum_limit\n";
  const double nan = std::nan("");
  for (double da : config.delta_a) {
    const bool finite = std::isfinite(da);
    const MeasurementSetup setup(config.tau, finite ? da : 1.0,
                                 config.mode_index);
    out << sci(da) << ','
        << sci(finite ? analytic_width(config.system, config.tau,
                                       config.mode_index, da)
                      : nan)
        << ',' << sci(finite ? classical_limit(setup) : nan) << ','
        << sci(finite ? quantum_limit(config.system, setup) : nan) << '\n';
  }
  return 0;
}

std::string describe_plan(const RunConfig& config) {
  std::ostringstream out;
  const double ell = config.system.quantum_scale();
  out << "system: mass = " << config.system.mass
      << ", omega = " << config.system.omega
      << ", beta = " << config.system.beta
      << " (beta_tilde = " << config.system.beta_dimensionless()
      << "), hbar = " << config.system.hbar << "\n"
      << "quantum scale = " << ell << "\n"
      << "measurement: tau = " << config.tau
      << ", mode_index = " << config.mode_index << " (Omega_n = "
      << MeasurementSetup(config.tau, 1.0, config.mode_index).mode_frequency()
      << ")\n"
      << "eps grid: " << config.numerics.eps_points << " points, half width "
      << config.numerics.eps_width_factor << " widths\n"
      << "resolution_scale = " << config.numerics.resolution_scale << "\n"
      << "rows: " << config.delta_a.size() << "\n";
  for (size_t i = 0; i < config.delta_a.size(); ++i) {
    const double da = config.delta_a[i];
    out << "  [" << i << "] delta_a = " << da << " (" << da / ell
        << " quantum scales)";
    try {
      const MeasurementSetup setup(config.tau, da, config.mode_index);
      const PhysicalSystem linear(config.system.mass, config.system.omega, 0.0,
                                  config.system.hbar);
      const double w = effective_width_linear(linear, setup);
      const NumericsPlan plan = plan_numerics(
          config.system, setup, config.numerics.eps_width_factor * w,
          config.numerics);
      out << ": linear width " << w << ", grid " << plan.num_points
          << " points over +-" << plan.half_width << ", dx = " << plan.dx
          << ", " << plan.num_steps << " steps, dt = " << plan.dt;
    } catch (const std::exception& e) {
      out << ": plan failed (" << e.what() << ")";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace qmon
