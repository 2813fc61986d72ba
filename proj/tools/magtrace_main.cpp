#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "magtrace/scenario.hpp"

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MAGTRACE_THREADS")) {
    int t = std::atoi(threads);
    if (t > 0) omp_set_num_threads(t);
  }

  CLI::App app{"magtrace: semiclassical trace expansion laboratory for magnetic "
               "Schroedinger operators"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long seed = -1;
  for (const char* name : {"trace_sweep", "gauge_check", "moyal_check", "hs_check", "agmon_check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "seed for randomized checks (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    magtrace::ScenarioConfig cfg = magtrace::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = (unsigned long)seed;

    const std::string cmd = app.get_subcommands().front()->get_name();
    int rc;
    if (cmd == "trace_sweep")
      rc = magtrace::cmd_trace_sweep(cfg);
    else if (cmd == "gauge_check")
      rc = magtrace::cmd_gauge_check(cfg);
    else if (cmd == "moyal_check")
      rc = magtrace::cmd_moyal_check(cfg);
    else if (cmd == "hs_check")
      rc = magtrace::cmd_hs_check(cfg);
    else
      rc = magtrace::cmd_agmon_check(cfg);
    if (rc != 0) std::cerr << cmd << ": check FAILED (see " << cfg.out_dir << ")\n";
    return rc;
  } catch (const magtrace::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
