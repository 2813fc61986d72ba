#pragma once

#include <functional>
#include <vector>

#include "magtrace/exec.hpp"
#include "magtrace/fields.hpp"
#include "magtrace/spectral.hpp"
#include "magtrace/symbols.hpp"

namespace magtrace {

// phase-space quadrature spec: trapezoid x-box [-L, L]^d, Gauss-Legendre in
// the radial/momentum directions
struct QuadSpec {
  double L = 4.0;
  int nx = 161;    // trapezoid points per x dimension
  int ngl = 48;    // Gauss-Legendre nodes for the u (or xi) integral
};

// T_0(g) = int dx dxi g(|xi|^2 + V) via the radial reduction
// c_d int dx int_0^inf g(u + V(x)) u^{d/2-1} du, c_d = pi^{d/2}/Gamma(d/2)
double T0(const TestFunction& g, const ScalarPotential& V, const QuadSpec& quad,
          Execution exec = Execution::parallel);

// T_2(g) = -(1/12) int dx [Delta V + ||B||^2] c_d int g''(u + V) u^{d/2-1} du
double T2(const TestFunction& g, const ScalarPotential& V, const MagneticField& B,
          const QuadSpec& quad, Execution exec = Execution::parallel);

// non-magnetic Hessian-contraction form
// -(1/24) int dx dxi g''(F) sum_jk (F_xixi F_xx - F_xxi F_xix)
double T2_hr(const TestFunction& g, const ScalarPotential& V, const QuadSpec& quad,
             Execution exec = Execution::parallel);

// direct tensor quadrature over (x, xi) for cross-checks against the radial
// reduction; xi box is [-xi_max, xi_max]^d with ngl GL nodes per direction
double phase_space_integral(const std::function<double(const Vec&, const Vec&)>& f, int d,
                            const QuadSpec& quad, double xi_max,
                            Execution exec = Execution::serial);

struct SweepRow {
  double hbar;
  double value;      // (2 pi hbar)^d Tr g(H)
  int grid_N;
  bool resolution_warning = false;
  bool cap_flag = false;
  bool failed = false;
};

struct FitResult {
  std::vector<double> coeffs;  // T-hat_j, j = 0..J (odd entries zero if even_only)
  double residual = 0.0;
  double cond = 0.0;
  double remainder_slope = 0.0;  // log-log slope of |value - T0 - hbar^2 T2|
  bool cond_warning = false;
  int rows_used = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  FitResult fit;
};

struct GridPolicy {
  double L = 4.0;
  int N = 0;               // 0 = auto from the resolution rule
  int stencil_order = 4;
  int max_N = 6000;        // auto clamp (1D banded solves stay cheap)
  double resolve_factor = 12.0;  // target h = hbar / (resolve_factor * p_max)
};

GridSpec resolve_grid(const GridPolicy& pol, int d, double hbar, double E_cap,
                      const ScalarPotential& V);

SweepTable hbar_sweep(const ScalarPotential& V, const VectorPotential& A, const TestFunction& g,
                      const std::vector<double>& hbar_list, double E_cap, const GridPolicy& pol,
                      Execution exec = Execution::parallel);

FitResult fit_expansion(const SweepTable& table, int J, bool even_only);

struct AgmonRow {
  double hbar;
  double trace_orig;
  double trace_mod;
  double delta;
};

struct AgmonReport {
  std::vector<AgmonRow> rows;
  double slope = 0.0;  // affine fit of log(delta) against 1/hbar
  double intercept = 0.0;
};

// Tr g(H) vs Tr g(H-hat) with the Agmon-modified potential chi(V); the gap is
// exponentially small in 1/hbar when supp g stays below E < Sigma_V.
AgmonReport agmon_compare(const ScalarPotential& V, const VectorPotential& A, double E,
                          const TestFunction& g, const std::vector<double>& hbar_list,
                          const GridPolicy& pol, double sigma_ceiling = 10.0,
                          Execution exec = Execution::parallel);

}  // namespace magtrace
