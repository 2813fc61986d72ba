#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "magtrace/fields.hpp"
#include "magtrace/semiclassics.hpp"
#include "magtrace/spectral.hpp"

namespace magtrace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HSOptions {
  int ext_order = 3;
  double mu_width = 1.0;
  int n_lambda = 12;  // per lambda panel
  int n_mu = 24;
  int n_panels = 12;
  std::vector<double> eps_ladder{0.04, 0.02, 0.01};
  double hbar = 0.3;
  int grid_N = 120;
};

struct AgmonOptions {
  double E = 1.0;
  double sigma_cap = 3.4;  // keeps Delta(h_ref) well above the double-precision floor
  std::vector<double> hbar{0.2, 0.15, 0.1, 0.05};
  double h_ref = 0.1;  // the criterion compares Delta(h_ref/2) against Delta(h_ref)
};

struct MoyalOptions {
  std::vector<double> hbar{0.5, 0.4, 0.3, 0.25};
  int grid_N = 0;  // 0 = dimension default (201 in 1D, 41 in 2D)
  double grid_L = 2.5;
  int n_xi = 32;
  double xi_span = 4.5;  // xi box half-width around the symbol centers
  double b = 0.0;        // constant magnetic field (d = 2)
};

struct GaugeCheckOptions {
  double b = 1.0;
  double hbar = 0.3;
  int grid_N = 36;
};

struct ScenarioConfig {
  std::string scenario;
  int d = 1;
  ScalarPotential V;
  VectorPotential A;
  MagneticField B;
  TestFunction g;
  std::vector<double> hbar;
  GridPolicy grid;
  QuadSpec quad;
  double E_cap = 1.0;
  int fit_J = 3;
  bool even_only = false;
  HSOptions hs;
  AgmonOptions agmon;
  MoyalOptions moyal;
  GaugeCheckOptions gauge;
  std::string out_dir = "out";
  unsigned long seed = 1;
  Execution exec = Execution::parallel;
};

std::vector<std::string> scenario_names();
ScenarioConfig load_config(const std::string& path);
ScenarioConfig config_from_json_text(const std::string& text);

// command entry points; return 0 on pass, 1 on check failure
int cmd_trace_sweep(const ScenarioConfig& cfg);
int cmd_gauge_check(const ScenarioConfig& cfg);
int cmd_moyal_check(const ScenarioConfig& cfg);
int cmd_hs_check(const ScenarioConfig& cfg);
int cmd_agmon_check(const ScenarioConfig& cfg);

// shortest round-trip decimal formatting (used for all CSV/TSV output)
std::string fmt_double(double v);

}  // namespace magtrace
