#include "magtrace/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "magtrace/moyal.hpp"
#include "magtrace/quantize.hpp"

namespace magtrace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> scenario_names() {
  return {"harmonic1d", "anharmonic1d", "gaussian_well1d", "harmonic2d", "harmonic2d_magnetic"};
}

namespace {

void apply_scenario_defaults(ScenarioConfig& cfg, const std::string& name) {
  cfg.gauge.b = 0.0;  // scenario-level field strength; gauge_check picks its own default
  if (name == "harmonic1d") {
    cfg.d = 1;
    cfg.V = make_harmonic(1);
    cfg.g = TestFunction{0.55, 0.35};
    cfg.hbar = {0.2, 0.15, 0.1, 0.05, 0.025};
    cfg.E_cap = 1.0;
    cfg.grid = GridPolicy{2.2, 0, 4, 7500, 30.0};
    cfg.quad = QuadSpec{2.2, 961, 48};
  } else if (name == "anharmonic1d") {
    cfg.d = 1;
    cfg.V = make_quartic(1, 0.25);
    cfg.g = TestFunction{0.55, 0.35};
    cfg.hbar = {0.2, 0.15, 0.1, 0.05, 0.025};
    cfg.E_cap = 1.0;
    cfg.grid = GridPolicy{2.1, 0, 4, 7500, 30.0};
    cfg.quad = QuadSpec{2.1, 961, 48};
  } else if (name == "gaussian_well1d") {
    cfg.d = 1;
    cfg.V = make_gaussian_well(1, 1.0, 1.0);
    cfg.g = TestFunction{-0.55, 0.3};
    cfg.hbar = {0.2, 0.15, 0.1, 0.05, 0.025};
    cfg.E_cap = -0.1;
    cfg.grid = GridPolicy{6.0, 0, 4, 7500, 30.0};
    cfg.quad = QuadSpec{6.0, 1441, 48};
  } else if (name == "harmonic2d" || name == "harmonic2d_magnetic") {
    cfg.d = 2;
    cfg.V = make_harmonic(2);
    cfg.g = TestFunction{0.55, 0.35};
    cfg.hbar = {0.4, 0.3, 0.2, 0.15};
    cfg.E_cap = 1.0;
    cfg.grid = GridPolicy{2.2, 54, 4, 7500, 12.0};
    cfg.quad = QuadSpec{2.2, 481, 48};
    cfg.even_only = true;  // four usable rows; the expansion is even in hbar
    if (name == "harmonic2d_magnetic") cfg.gauge.b = 1.0;
  } else {
    std::string names;
    for (const auto& s : scenario_names()) names += " " + s;
    throw ConfigError("unknown scenario '" + name + "'; registry:" + names);
  }
  cfg.scenario = name;
}

double jget(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
  return j[key].get<double>();
}

int jget_int(const json& j, const char* key, int dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer())
    throw ConfigError(std::string("config field '") + key + "' must be an integer");
  return j[key].get<int>();
}

std::vector<double> jget_list(const json& j, const char* key, std::vector<double> dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_array()) throw ConfigError(std::string("config field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError(std::string("config field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void parse_potential(ScenarioConfig& cfg, const json& jp) {
  std::string family = jp.value("family", "harmonic");
  if (family == "harmonic")
    cfg.V = make_harmonic(cfg.d, jget(jp, "k", 1.0));
  else if (family == "quartic")
    cfg.V = make_quartic(cfg.d, jget(jp, "q", 0.25));
  else if (family == "gaussian_well")
    cfg.V = make_gaussian_well(cfg.d, jget(jp, "depth", 1.0), jget(jp, "width", 1.0));
  else if (family == "zero")
    cfg.V = make_zero_potential(cfg.d);
  else
    throw ConfigError("unknown potential family '" + family + "'");
}

void parse_gauge(ScenarioConfig& cfg, const json& jg) {
  std::string type = jg.value("type", "zero");
  double b = jget(jg, "b", cfg.gauge.b);
  cfg.gauge.b = b;
  if (type == "zero" || b == 0.0) {
    cfg.A = make_zero_gauge(cfg.d);
    cfg.B = make_zero_field(cfg.d);
    return;
  }
  if (cfg.d != 2) throw ConfigError("magnetic gauges require d = 2");
  if (type == "landau")
    cfg.A = make_landau_gauge(b);
  else if (type == "symmetric")
    cfg.A = make_symmetric_gauge(b);
  else if (type == "bump") {
    double w = jget(jg, "w", 1.0);
    cfg.A = make_bump_gauge(b, w);
    cfg.B = make_gaussian_bump_field(b, w);
    return;
  } else
    throw ConfigError("unknown gauge type '" + type + "'");
  cfg.B = make_constant_field(b);
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.contains("scenario") || !j["scenario"].is_string())
    throw ConfigError("config must name a 'scenario' (string)");

  ScenarioConfig cfg;
  apply_scenario_defaults(cfg, j["scenario"].get<std::string>());

  if (j.contains("gauge")) parse_gauge(cfg, j["gauge"]);
  else if (cfg.gauge.b != 0.0) parse_gauge(cfg, json{{"type", "symmetric"}});
  else { cfg.A = make_zero_gauge(cfg.d); cfg.B = make_zero_field(cfg.d); }
  if (j.contains("potential")) parse_potential(cfg, j["potential"]);

  if (j.contains("g")) {
    const json& jg = j["g"];
    cfg.g = make_test_function(jg.value("profile", "bump"), jget(jg, "center", cfg.g.center),
                               jget(jg, "width", cfg.g.width), jget(jg, "scale", 1.0));
    if (cfg.g.width <= 0.0) throw ConfigError("g.width must be positive");
  }
  cfg.hbar = jget_list(j, "hbar", cfg.hbar);
  for (double h : cfg.hbar)
    if (h <= 0.0) throw ConfigError("hbar entries must be positive");
  cfg.E_cap = jget(j, "E_cap", cfg.E_cap);

  if (j.contains("grid")) {
    const json& jg = j["grid"];
    cfg.grid.L = jget(jg, "L", cfg.grid.L);
    cfg.grid.N = jget_int(jg, "N", cfg.grid.N);
    cfg.grid.stencil_order = jget_int(jg, "order", cfg.grid.stencil_order);
    cfg.grid.max_N = jget_int(jg, "max_N", cfg.grid.max_N);
    cfg.grid.resolve_factor = jget(jg, "resolve_factor", cfg.grid.resolve_factor);
  }
  if (j.contains("quad")) {
    const json& jq = j["quad"];
    cfg.quad.L = jget(jq, "L", cfg.quad.L);
    cfg.quad.nx = jget_int(jq, "nx", cfg.quad.nx);
    cfg.quad.ngl = jget_int(jq, "ngl", cfg.quad.ngl);
  }
  if (j.contains("fit")) {
    cfg.fit_J = jget_int(j["fit"], "J", cfg.fit_J);
    cfg.even_only = j["fit"].value("even_only", cfg.even_only);
  }
  if (j.contains("hs")) {
    const json& jh = j["hs"];
    cfg.hs.ext_order = jget_int(jh, "N", cfg.hs.ext_order);
    cfg.hs.mu_width = jget(jh, "mu_width", cfg.hs.mu_width);
    cfg.hs.n_lambda = jget_int(jh, "n_lambda", cfg.hs.n_lambda);
    cfg.hs.n_mu = jget_int(jh, "n_mu", cfg.hs.n_mu);
    cfg.hs.n_panels = jget_int(jh, "n_panels", cfg.hs.n_panels);
    cfg.hs.eps_ladder = jget_list(jh, "eps_ladder", cfg.hs.eps_ladder);
    cfg.hs.hbar = jget(jh, "hbar", cfg.hs.hbar);
    cfg.hs.grid_N = jget_int(jh, "grid_N", cfg.hs.grid_N);
  }
  if (j.contains("agmon")) {
    const json& ja = j["agmon"];
    cfg.agmon.E = jget(ja, "E", cfg.agmon.E);
    cfg.agmon.sigma_cap = jget(ja, "sigma_cap", cfg.agmon.sigma_cap);
    cfg.agmon.hbar = jget_list(ja, "hbar", cfg.agmon.hbar);
    cfg.agmon.h_ref = jget(ja, "h_ref", cfg.agmon.h_ref);
  }
  if (j.contains("moyal")) {
    const json& jm = j["moyal"];
    cfg.moyal.hbar = jget_list(jm, "hbar", cfg.moyal.hbar);
    cfg.moyal.grid_N = jget_int(jm, "grid_N", cfg.moyal.grid_N);
    cfg.moyal.grid_L = jget(jm, "grid_L", cfg.moyal.grid_L);
    cfg.moyal.n_xi = jget_int(jm, "n_xi", cfg.moyal.n_xi);
    cfg.moyal.xi_span = jget(jm, "xi_span", cfg.moyal.xi_span);
    cfg.moyal.b = jget(jm, "b", cfg.d == 2 ? cfg.gauge.b : 0.0);
  } else if (cfg.d == 2) {
    cfg.moyal.b = cfg.gauge.b;
  }
  if (j.contains("gauge_check")) {
    const json& jc = j["gauge_check"];
    cfg.gauge.b = jget(jc, "b", cfg.gauge.b);
    cfg.gauge.hbar = jget(jc, "hbar", cfg.gauge.hbar);
    cfg.gauge.grid_N = jget_int(jc, "grid_N", cfg.gauge.grid_N);
    if (jc.contains("b_alt") && jget(jc, "b_alt", cfg.gauge.b) != cfg.gauge.b)
      throw ConfigError("gauge_check: the two gauges have unequal curl; comparison is meaningless");
  }
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long>();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

namespace {

void ensure_out(const std::string& dir) { std::filesystem::create_directories(dir); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= 0.0) continue;
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

int cmd_trace_sweep(const ScenarioConfig& cfg) {
  ensure_out(cfg.out_dir);
  SweepTable table = hbar_sweep(cfg.V, cfg.A, cfg.g, cfg.hbar, cfg.E_cap, cfg.grid, cfg.exec);
  table.fit = fit_expansion(table, cfg.fit_J, cfg.even_only);
  FitResult fit_even = cfg.even_only ? table.fit : fit_expansion(table, cfg.fit_J, true);

  double t0q = T0(cfg.g, cfg.V, cfg.quad, cfg.exec);
  double t2q = T2(cfg.g, cfg.V, cfg.B, cfg.quad, cfg.exec);

  // sweep.csv
  std::string csv = "hbar,value,grid_N,flags\n";
  bool any_failed = false;
  for (const auto& r : table.rows) {
    std::string flags;
    if (r.resolution_warning) flags += "resolution_warning;";
    if (r.cap_flag) flags += "cap_boundary;";
    if (r.failed) { flags += "failed;"; any_failed = true; }
    if (!flags.empty()) flags.pop_back();
    csv += fmt_double(r.hbar) + "," + fmt_double(r.value) + "," + std::to_string(r.grid_N) + "," +
           flags + "\n";
  }
  write_file(cfg.out_dir + "/sweep.csv", csv);

  // plotdata.tsv: log hbar vs log remainder
  std::string tsv = "log_hbar\tlog_remainder\n";
  double t0 = table.fit.coeffs[0];
  double t2 = table.fit.coeffs.size() > 2 ? table.fit.coeffs[2] : 0.0;
  for (const auto& r : table.rows) {
    if (r.failed) continue;
    double rem = std::abs(r.value - t0 - r.hbar * r.hbar * t2);
    if (rem <= 0.0) continue;
    tsv += fmt_double(std::log(r.hbar)) + "\t" + fmt_double(std::log(rem)) + "\n";
  }
  write_file(cfg.out_dir + "/plotdata.tsv", tsv);

  double t0_rel = std::abs(t0 - t0q) / std::max(std::abs(t0q), 1e-300);
  const double t0_tol = 1e-3;
  bool t0_pass = t0_rel <= t0_tol;

  json out;
  out["scenario"] = cfg.scenario;
  out["coefficients"] = table.fit.coeffs;
  out["coefficients_even_only"] = fit_even.coeffs;
  out["residual"] = table.fit.residual;
  out["residual_even_only"] = fit_even.residual;
  out["condition_number"] = table.fit.cond;
  out["condition_warning"] = table.fit.cond_warning;
  out["remainder_slope"] = table.fit.remainder_slope;
  out["T0_quadrature"] = t0q;
  out["T2_quadrature"] = t2q;
  out["T0_fit_rel_mismatch"] = t0_rel;
  out["T0_tolerance"] = t0_tol;
  out["T0_pass"] = t0_pass;
  out["T2_fit_minus_quadrature"] = t2 - t2q;
  out["rows_failed"] = any_failed;
  write_file(cfg.out_dir + "/fit.json", out.dump(2) + "\n");

  return (t0_pass && !any_failed) ? 0 : 1;
}

int cmd_gauge_check(const ScenarioConfig& cfg) {
  if (cfg.d != 2) throw ConfigError("gauge_check requires a 2D scenario");
  ensure_out(cfg.out_dir);
  double b = cfg.gauge.b != 0.0 ? cfg.gauge.b : 1.0;
  double hb = cfg.gauge.hbar;
  GridSpec grid{2, cfg.grid.L, cfg.gauge.grid_N, cfg.grid.stencil_order};

  MagneticOperatorMatrix HL = build_hamiltonian(cfg.V, make_landau_gauge(b), hb, grid, cfg.E_cap,
                                                cfg.exec);
  MagneticOperatorMatrix HS = build_hamiltonian(cfg.V, make_symmetric_gauge(b), hb, grid,
                                                cfg.E_cap, cfg.exec);

  SpectralData sL = eigensolve(HL, cfg.E_cap);
  SpectralData sS = eigensolve(HS, cfg.E_cap);
  double max_rel_gap = 0.0;
  for (size_t i = 0; i < sL.evals.size(); ++i) {
    if (sL.evals[i] > cfg.E_cap) break;
    double scale = std::max({std::abs(sL.evals[i]), std::abs(sS.evals[i]), 1e-8});
    max_rel_gap = std::max(max_rel_gap, std::abs(sL.evals[i] - sS.evals[i]) / scale);
  }
  double trL = trace_g(sL, cfg.g), trS = trace_g(sS, cfg.g);
  double tr_rel = std::abs(trL - trS) / std::max(std::abs(trL), 1e-300);

  // A_landau - A_symmetric = grad(b x1 x2 / 2): conjugation must map exactly
  GaugeFunction phi{2, separable_field(2, {monomial1d(b / 2.0, 1), monomial1d(1.0, 1)})};
  MagneticOperatorMatrix HC = gauge_conjugate(HS, phi);
  double conj_err = (HC.M - HL.M).cwiseAbs().maxCoeff();
  double scale = HL.M.cwiseAbs().maxCoeff();

  const double ev_tol = 1e-9, conj_tol = 1e-10;
  bool pass = max_rel_gap <= ev_tol && tr_rel <= ev_tol && conj_err <= conj_tol * scale;

  json out;
  out["b"] = b;
  out["hbar"] = hb;
  out["grid_N"] = grid.N;
  out["max_eigenvalue_rel_gap"] = max_rel_gap;
  out["trace_rel_gap"] = tr_rel;
  out["eigen_tolerance"] = ev_tol;
  out["conjugation_entrywise_error"] = conj_err;
  out["conjugation_scale"] = scale;
  out["conjugation_tolerance_rel"] = conj_tol;
  out["pass"] = pass;
  write_file(cfg.out_dir + "/gauge.json", out.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_moyal_check(const ScenarioConfig& cfg) {
  ensure_out(cfg.out_dir);
  int d = cfg.d;
  double b = (d == 2) ? cfg.moyal.b : 0.0;
  VectorPotential A = (b != 0.0) ? make_symmetric_gauge(b) : make_zero_gauge(d);
  MagneticField B = (b != 0.0) ? make_constant_field(b) : make_zero_field(d);

  // random Gaussian pair, reproducible from the seed
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> ctr(-0.35, 0.35), wid(0.9, 1.15);
  auto make_gauss = [&]() {
    GaussianSymbol s;
    s.d = d;
    std::vector<std::function<double(double, int)>> axes;
    for (int j = 0; j < d; ++j) {
      double x0 = ctr(rng), wa = wid(rng);
      auto g1 = gaussian1d(wa);
      axes.push_back([g1, x0](double t, int k) { return g1(t - x0, k); });
    }
    s.amp = separable_field(d, axes);
    for (int j = 0; j < d; ++j) s.xi0[j] = ctr(rng);
    s.w = wid(rng);
    return s;
  };
  GaussianSymbol phi = make_gauss(), psi = make_gauss();
  SymbolFn phif = as_symbol(phi), psif = as_symbol(psi);

  int N = cfg.moyal.grid_N > 0 ? cfg.moyal.grid_N : (d == 1 ? 201 : 41);
  GridSpec grid{d, cfg.moyal.grid_L, N, 4};
  double xi_lo = std::min({phi.xi0[0], psi.xi0[0], d == 2 ? phi.xi0[1] : 0.0,
                           d == 2 ? psi.xi0[1] : 0.0}) - cfg.moyal.xi_span;
  double xi_hi = std::max({phi.xi0[0], psi.xi0[0], d == 2 ? phi.xi0[1] : 0.0,
                           d == 2 ? psi.xi0[1] : 0.0}) + cfg.moyal.xi_span;

  auto c0fn = [&](const Vec& x, const Vec& xi) { return c0(phif, psif, x, xi); };
  auto c1fn = [&](const Vec& x, const Vec& xi) { return c1(phif, psif, B, x, xi); };
  auto c2fn = [&](const Vec& x, const Vec& xi) { return c2(phif, psif, B, x, xi); };
  SymbolGrid g0 = sample_symbol_grid(c0fn, d, grid, xi_lo, xi_hi, cfg.moyal.n_xi, cfg.exec);
  SymbolGrid g1 = sample_symbol_grid(c1fn, d, grid, xi_lo, xi_hi, cfg.moyal.n_xi, cfg.exec);
  SymbolGrid g2 = sample_symbol_grid(c2fn, d, grid, xi_lo, xi_hi, cfg.moyal.n_xi, cfg.exec);

  double w_min = std::min(phi.w, psi.w);
  std::vector<double> errs_full, errs_noc2;
  std::string csv = "hbar,err_full,err_no_c2\n";
  for (double hb : cfg.moyal.hbar) {
    MagneticOperatorMatrix Kphi = build_op_kernel(phi, A, hb, grid, cfg.exec);
    MagneticOperatorMatrix Kpsi = build_op_kernel(psi, A, hb, grid, cfg.exec);
    Eigen::MatrixXcd P = Kphi.M * Kpsi.M;
    double pn = P.norm();
    double v_cut = 8.0 * hb / w_min;
    MagneticOperatorMatrix Kfull = quantize_symbol_grids(
        {&g0, &g1, &g2}, {Cplx(1.0, 0.0), Cplx(hb, 0.0), Cplx(hb * hb, 0.0)}, A, hb, v_cut,
        cfg.exec);
    MagneticOperatorMatrix K01 = quantize_symbol_grids({&g0, &g1}, {Cplx(1.0, 0.0), Cplx(hb, 0.0)},
                                                       A, hb, v_cut, cfg.exec);
    double ef = (P - Kfull.M).norm() / pn;
    double e0 = (P - K01.M).norm() / pn;
    errs_full.push_back(ef);
    errs_noc2.push_back(e0);
    csv += fmt_double(hb) + "," + fmt_double(ef) + "," + fmt_double(e0) + "\n";
  }
  write_file(cfg.out_dir + "/moyal.csv", csv);

  double slope_full = loglog_slope(cfg.moyal.hbar, errs_full);
  double slope_noc2 = loglog_slope(cfg.moyal.hbar, errs_noc2);
  const double full_min = 2.5, noc2_max = 2.3;
  bool pass = slope_full >= full_min && slope_noc2 <= noc2_max;

  json out;
  out["d"] = d;
  out["b"] = b;
  out["hbar"] = cfg.moyal.hbar;
  out["err_full"] = errs_full;
  out["err_no_c2"] = errs_noc2;
  out["slope_full"] = slope_full;
  out["slope_full_min"] = full_min;
  out["slope_no_c2"] = slope_noc2;
  out["slope_no_c2_max"] = noc2_max;
  out["pass"] = pass;
  write_file(cfg.out_dir + "/moyal.json", out.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_hs_check(const ScenarioConfig& cfg) {
  if (cfg.d != 1) throw ConfigError("hs_check is configured for 1D scenarios");
  ensure_out(cfg.out_dir);
  GridSpec grid{1, cfg.grid.L, cfg.hs.grid_N, cfg.grid.stencil_order};
  MagneticOperatorMatrix H = build_hamiltonian(cfg.V, cfg.A, cfg.hs.hbar, grid, 0.0, cfg.exec);
  Eigen::MatrixXcd ref = spectral_apply(H, cfg.g);
  double refn = std::max(ref.norm(), 1e-300);

  HSQuadrature quad{cfg.hs.n_lambda, cfg.hs.n_mu, cfg.hs.eps_ladder.front(), cfg.hs.n_panels};
  AlmostAnalyticExtension ext{cfg.g, cfg.hs.ext_order, cfg.hs.mu_width};

  std::vector<double> ladder_dist;
  for (double eps : cfg.hs.eps_ladder) {
    quad.eps = eps;
    ladder_dist.push_back((hs_apply(H, ext, quad, cfg.exec) - ref).norm() / refn);
  }
  Eigen::MatrixXcd Ghs = hs_apply_extrapolated(H, ext, quad, cfg.hs.eps_ladder, cfg.exec);
  double dist = (Ghs - ref).norm() / refn;
  double tr_hs = Ghs.trace().real();
  SpectralData s = eigensolve(H, 0.0);
  double tr_sp = trace_g(s, cfg.g);

  AlmostAnalyticExtension ext1{cfg.g, 1, cfg.hs.mu_width};
  double dist_n1 =
      (hs_apply_extrapolated(H, ext1, quad, cfg.hs.eps_ladder, cfg.exec) - ref).norm() / refn;

  const double tol = 1e-3;
  bool pass = dist <= tol && dist_n1 > dist;

  json out;
  out["hbar"] = cfg.hs.hbar;
  out["grid_N"] = grid.N;
  out["eps_ladder"] = cfg.hs.eps_ladder;
  out["ladder_rel_distance"] = ladder_dist;
  out["extrapolated_rel_distance"] = dist;
  out["tolerance"] = tol;
  out["trace_hs"] = tr_hs;
  out["trace_spectral"] = tr_sp;
  out["trace_rel_gap"] = std::abs(tr_hs - tr_sp) / std::max(std::abs(tr_sp), 1e-300);
  out["extension_order"] = cfg.hs.ext_order;
  out["order1_rel_distance"] = dist_n1;
  out["order_comparison_pass"] = dist_n1 > dist;
  out["pass"] = pass;
  write_file(cfg.out_dir + "/hs.json", out.dump(2) + "\n");
  return pass ? 0 : 1;
}

int cmd_agmon_check(const ScenarioConfig& cfg) {
  ensure_out(cfg.out_dir);
  AgmonReport rep = agmon_compare(cfg.V, cfg.A, cfg.agmon.E, cfg.g, cfg.agmon.hbar, cfg.grid,
                                  cfg.agmon.sigma_cap, cfg.exec);
  std::string csv = "hbar,trace_orig,trace_mod,delta\n";
  for (const auto& r : rep.rows)
    csv += fmt_double(r.hbar) + "," + fmt_double(r.trace_orig) + "," + fmt_double(r.trace_mod) +
           "," + fmt_double(r.delta) + "\n";
  write_file(cfg.out_dir + "/agmon.csv", csv);

  // super-polynomial decay: Delta at h_ref small, and halving hbar beats h^6
  double d_ref = -1.0, d_half = -1.0;
  for (const auto& r : rep.rows) {
    if (std::abs(r.hbar - cfg.agmon.h_ref) < 1e-12) d_ref = r.delta;
    if (std::abs(r.hbar - 0.5 * cfg.agmon.h_ref) < 1e-12) d_half = r.delta;
  }
  const double ref_tol = 1e-6, ratio_tol = std::pow(0.5, 6);
  bool have = d_ref >= 0.0 && d_half >= 0.0;
  bool pass = have && d_ref <= ref_tol && d_half <= ratio_tol * d_ref;

  json out;
  out["E"] = cfg.agmon.E;
  out["sigma_cap"] = cfg.agmon.sigma_cap;
  out["exp_fit_slope_vs_inv_hbar"] = rep.slope;
  out["delta_at_h_ref"] = d_ref;
  out["delta_at_half_h_ref"] = d_half;
  out["h_ref"] = cfg.agmon.h_ref;
  out["delta_tolerance"] = ref_tol;
  out["ratio_tolerance"] = ratio_tol;
  out["pass"] = pass;
  write_file(cfg.out_dir + "/agmon.json", out.dump(2) + "\n");
  return pass ? 0 : 1;
}

}  // namespace magtrace
