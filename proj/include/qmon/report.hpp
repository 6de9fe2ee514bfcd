#pragma once

#include <iosfwd>
#include <string>

#include "qmon/config.hpp"
#include "qmon/sweep.hpp"

namespace qmon {

// Runs the scan described by the config and writes scan.csv, one
// profile-<i>.csv per successful row (when enabled), manifest.txt and
// scan.svg (when enabled) into out_dir.  Returns 0 if every row succeeded,
// 2 if some rows recorded failures.  Progress goes to *log when given.
int run_experiment(const RunConfig& config, const std::string& out_dir,
                   std::ostream* log = nullptr);

// Writes analytic.csv with the closed-form linear widths and both
// asymptotes for the config's delta_a list.  Returns 0.
int run_analytic(const RunConfig& config, const std::string& out_dir);

// Human-readable resolved settings and per-row numerics plans, written
// without running any evolution.
std::string describe_plan(const RunConfig& config);

}  // namespace qmon
