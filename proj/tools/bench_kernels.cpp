// Serial vs OpenMP timings for the hot kernels: Hamiltonian assembly, Gaussian
// kernel quantization, Moyal coefficient grids, and HS resolvent sums.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "magtrace/moyal.hpp"
#include "magtrace/quantize.hpp"
#include "magtrace/spectral.hpp"

using namespace magtrace;

namespace {

template <typename F>
double time_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  ScalarPotential V = make_harmonic(2);
  VectorPotential A = make_symmetric_gauge(1.0);
  MagneticField B = make_constant_field(1.0);
  GridSpec grid{2, 2.2, 40, 4};
  double hbar = 0.3;

  report("build_hamiltonian (2D)",
         time_ms([&] { build_hamiltonian(V, A, hbar, grid, 1.0, Execution::serial); }),
         time_ms([&] { build_hamiltonian(V, A, hbar, grid, 1.0, Execution::parallel); }));

  GaussianSymbol phi{2, separable_field(2, {gaussian1d(1.0), gaussian1d(1.0)}), {0.2, -0.1}, 1.0};
  report("build_op_kernel (2D)",
         time_ms([&] { build_op_kernel(phi, A, hbar, grid, Execution::serial); }),
         time_ms([&] { build_op_kernel(phi, A, hbar, grid, Execution::parallel); }));

  SymbolFn phif = as_symbol(phi), psif = as_symbol(phi);
  PhaseGrid pg;
  pg.d = 2;
  pg.x[0] = pg.x[1] = PhaseAxis{-1.5, 1.5, 24};
  pg.xi[0] = pg.xi[1] = PhaseAxis{-2.5, 2.5, 24};
  report("eval c2 grid (2D)",
         time_ms([&] { eval_ck_grid(2, phif, psif, B, pg, Execution::serial); }),
         time_ms([&] { eval_ck_grid(2, phif, psif, B, pg, Execution::parallel); }));

  ScalarPotential V1 = make_harmonic(1);
  GridSpec g1{1, 2.2, 120, 4};
  MagneticOperatorMatrix H = build_hamiltonian(V1, make_zero_gauge(1), 0.3, g1, 0.0);
  TestFunction g{0.55, 0.35};
  AlmostAnalyticExtension ext{g, 3, 1.0};
  HSQuadrature quad{8, 12, 0.02, 6};
  report("hs_apply resolvent sum",
         time_ms([&] { hs_apply(H, ext, quad, Execution::serial); }),
         time_ms([&] { hs_apply(H, ext, quad, Execution::parallel); }));

  return 0;
}
