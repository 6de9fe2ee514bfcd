#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "qmon/config.hpp"
#include "qmon/report.hpp"

namespace {

qmon::RunConfig load_or_die(const std::string& path) {
  return qmon::load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous position monitoring: sweeps, closed forms, checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool plots = false;
  int parallel = -1;

  CLI::App* run = app.add_subcommand("run", "sweep delta_a and write CSV/SVG");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (default from config)");
  run->add_flag("--plots", plots, "also write scan.svg");
  run->add_option("--parallel", parallel,
                  "worker threads, 0 = all hardware threads");

  CLI::App* validate =
      app.add_subcommand("validate", "parse the config and print the plan");
  validate->add_option("config", config_path, "config file")->required();

  CLI::App* analytic = app.add_subcommand(
      "analytic", "write the closed-form widths for the config's rows");
  analytic->add_option("config", config_path, "config file")->required();
  analytic->add_option("--out", out_dir, "output directory (default from config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    qmon::RunConfig cfg = load_or_die(config_path);
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    if (plots) cfg.output.plots = true;
    if (parallel >= 0) cfg.parallel = parallel;

    if (run->parsed())
      return qmon::run_experiment(cfg, cfg.output.directory, &std::cout);
    if (validate->parsed()) {
      std::cout << qmon::describe_plan(cfg);
      return 0;
    }
    return qmon::run_analytic(cfg, cfg.output.directory);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
