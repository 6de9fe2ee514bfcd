#pragma once

#include <string>
#include <vector>

#include "qmon/common.hpp"
#include "qmon/model.hpp"
#include "qmon/sweep.hpp"

namespace qmon {

struct OutputSettings {
  std::string directory = "out";
  bool plots = false;
  bool profiles = true;
};

// A full experiment: one system, one monitoring window and mode, a list of
// delta_a rows to sweep.
struct RunConfig {
  PhysicalSystem system;
  double tau = pi;
  int mode_index = 1;
  std::vector<double> delta_a;
  SweepSettings numerics;
  OutputSettings output;
  int parallel = 1;
};

// INI-style configuration:
//
//   [system]
//   mass = 1.0
//   omega = 1.0
//   beta_tilde = 0.0          # or beta = <absolute value>
//   hbar = 1.0
//
//   [measurement]
//   tau = 3.141592653589793   # default pi / omega
//   mode_index = 1
//   delta_a = 0.1 1.0 10.0    # or: logspace 1e-2 1e2 15
//                             # or: perdecade 1e-2 1e2 11
//
//   [numerics]                # all optional
//   eps_points = 129
//   omega_dt = 0.01
//   resolution_scale = 1.0
//   eps_width_factor = 6.0
//   grid_half_width = 0       # override, 0 = automatic
//   grid_points = 0           # override, odd
//   time_steps = 0            # override
//
//   [output]
//   directory = out
//   plots = false
//   profiles = true
//
//   [run]
//   parallel = 1              # 0 = all hardware threads
//
// Unknown sections or keys, malformed lines and duplicate keys are
// ParseError with a line number; values outside their domain are
// ValidationError naming the field.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

// logspace start stop count, endpoints included.
std::vector<double> log_spaced(double start, double stop, Index count);

}  // namespace qmon
