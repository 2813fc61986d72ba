#pragma once

#include <functional>
#include <vector>

#include "magtrace/exec.hpp"
#include "magtrace/fields.hpp"
#include "magtrace/symbols.hpp"

namespace magtrace {

// Combinatorial weights T^gamma_delta of the triangle-flux Taylor expansion,
// from the double integral int_{-1}^{1} ds int_{-1}^{-s} dt (s y + t z)^gamma.
// Closed-form entries for |gamma| <= 1; the defining integral is exposed for
// verification.
struct MoyalCoefficientTable {
  static double t00() { return 2.0; }         // gamma = 0
  static double t_unit_low() { return -2.0 / 3.0; }   // gamma = e_m, delta = 0 (z-weight)
  static double t_unit_high() { return -2.0 / 3.0; }  // gamma = e_m, delta = e_m (y-weight)

  // numeric evaluation of the defining (s,t) integral for monomial (sy+tz)^gamma
  // with y^delta z^{gamma-delta} coefficient extraction via sampling
  static double defining_integral(const MultiIndex& gamma, double y, double z);
};

// hbar-expansion coefficients of the magnetic Moyal product, k <= 2.
Cplx c0(const SymbolFn& phi, const SymbolFn& psi, const Vec& x, const Vec& xi);
Cplx c1(const SymbolFn& phi, const SymbolFn& psi, const MagneticField& B, const Vec& x,
        const Vec& xi);
Cplx c2(const SymbolFn& phi, const SymbolFn& psi, const MagneticField& B, const Vec& x,
        const Vec& xi);

// closed form of c2(p_z, p_z^{-1}) as a resolvent expansion
ResolventExpansion c2_resolvent(Cplx z, const ScalarPotential& V, const MagneticField& B);
// resolvent parametrix corrections r_1 = 0, r_2 = -p_z^{-1} c2(p_z, p_z^{-1})
ResolventExpansion r1(Cplx z, const ScalarPotential& V, const MagneticField& B);
ResolventExpansion r2(Cplx z, const ScalarPotential& V, const MagneticField& B);

// Non-magnetic functional-calculus coefficient g_2 of the symbol of g(Op(F)):
// g_2 = p22 g''(F0) + p23 g'''(F0) for symbols with no subprincipal part.
// `g` maps (t, k) to the k-th derivative of the test function.
double g2_symbol(const std::function<double(double, int)>& g, const PolySymbol& F0, const Vec& x,
                 const Vec& xi);

// grid evaluation (values laid out x-major then xi) of one of the c_k kernels
struct PhaseAxis {
  double lo = 0.0, hi = 0.0;
  int n = 1;
  double point(int i) const { return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1); }
  double step() const { return n == 1 ? (hi - lo) : (hi - lo) / (n - 1); }
};

struct PhaseGrid {
  int d = 1;
  std::array<PhaseAxis, 2> x;
  std::array<PhaseAxis, 2> xi;
  long points() const {
    long p = 1;
    for (int j = 0; j < d; ++j) p *= (long)x[j].n * xi[j].n;
    return p;
  }
};

std::vector<Cplx> eval_ck_grid(int k, const SymbolFn& phi, const SymbolFn& psi,
                               const MagneticField& B, const PhaseGrid& grid,
                               Execution exec = Execution::parallel);

}  // namespace magtrace
