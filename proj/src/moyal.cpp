#include "magtrace/moyal.hpp"

#include <cmath>

#include "magtrace/quadrature.hpp"

namespace magtrace {

double MoyalCoefficientTable::defining_integral(const MultiIndex& gamma, double y, double z) {
  // int_{-1}^{1} ds int_{-1}^{-s} dt (s y + t z)^{gamma}, 1D monomial version
  int p = gamma.order();
  auto inner = [&](double s) {
    return gauss_integrate([&](double t) { return std::pow(s * y + t * z, p); }, -1.0, -s, 16);
  };
  return gauss_integrate(inner, -1.0, 1.0, 16);
}

Cplx c0(const SymbolFn& phi, const SymbolFn& psi, const Vec& x, const Vec& xi) {
  return phi(x, xi) * psi(x, xi);
}

namespace {
const Cplx kIhalf(0.0, 0.5);

// Sign convention of the triangle flux relative to B_12: pinned by the
// operator-composition oracle (tests/test_moyal.cpp); flips all odd-in-B terms.
constexpr double kMagSign = -1.0;

MultiIndex u(int d, int j) { return MultiIndex::unit(d, j); }
MultiIndex zero(int d) { return MultiIndex(d); }
}  // namespace

Cplx c1(const SymbolFn& phi, const SymbolFn& psi, const MagneticField& B, const Vec& x,
        const Vec& xi) {
  int d = phi.d;
  Cplx s = 0.0;
  for (int j = 0; j < d; ++j) {
    s += phi.deriv(x, xi, u(d, j), zero(d)) * psi.deriv(x, xi, zero(d), u(d, j));
    s -= phi.deriv(x, xi, zero(d), u(d, j)) * psi.deriv(x, xi, u(d, j), zero(d));
  }
  if (!B.is_zero()) {
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double b = B.component(j, k, x);
        if (b == 0.0) continue;
        s += kMagSign * b * phi.deriv(x, xi, zero(d), u(d, k)) *
             psi.deriv(x, xi, zero(d), u(d, j));
      }
  }
  return kIhalf * s;
}

Cplx c2(const SymbolFn& phi, const SymbolFn& psi, const MagneticField& B, const Vec& x,
        const Vec& xi) {
  int d = phi.d;
  Cplx s = 0.0;
  // non-magnetic second-order transport
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      MultiIndex xjk = u(d, j) + u(d, k);
      s += -0.125 * phi.deriv(x, xi, xjk, zero(d)) * psi.deriv(x, xi, zero(d), xjk);
      s += -0.125 * phi.deriv(x, xi, zero(d), xjk) * psi.deriv(x, xi, xjk, zero(d));
      s += 0.25 * phi.deriv(x, xi, u(d, j), u(d, k)) * psi.deriv(x, xi, u(d, k), u(d, j));
    }
  if (!B.is_zero()) {
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double b = B.component(j, k, x);
        // one B, one transport derivative on each side
        for (int m = 0; m < d; ++m) {
          if (b != 0.0) {
            s += kMagSign * -0.25 * b * phi.deriv(x, xi, u(d, m), u(d, k)) *
                 psi.deriv(x, xi, zero(d), u(d, j) + u(d, m));
            s += kMagSign * 0.25 * b * phi.deriv(x, xi, zero(d), u(d, k) + u(d, m)) *
                 psi.deriv(x, xi, u(d, m), u(d, j));
          }
          // gradient-of-B terms
          double db = B.component_deriv(j, k, x, u(d, m));
          if (db != 0.0) {
            s += kMagSign * (1.0 / 12.0) * db * phi.deriv(x, xi, zero(d), u(d, k) + u(d, m)) *
                 psi.deriv(x, xi, zero(d), u(d, j));
            s += kMagSign * (-1.0 / 12.0) * db * phi.deriv(x, xi, zero(d), u(d, k)) *
                 psi.deriv(x, xi, zero(d), u(d, j) + u(d, m));
          }
        }
        // B (x) B
        if (b != 0.0)
          for (int j2 = 0; j2 < d; ++j2)
            for (int k2 = 0; k2 < d; ++k2) {
              double b2 = B.component(j2, k2, x);
              if (b2 == 0.0) continue;
              s += -0.125 * b * b2 * phi.deriv(x, xi, zero(d), u(d, k) + u(d, k2)) *
                   psi.deriv(x, xi, zero(d), u(d, j) + u(d, j2));
            }
      }
  }
  return s;
}

ResolventExpansion c2_resolvent(Cplx z, const ScalarPotential& V, const MagneticField& B) {
  int d = V.d;
  ResolventExpansion out;
  out.d = d;
  out.z = z;
  out.V = V;

  PolySymbol q1(d);  // coefficient of p_z^{-2}
  PolySymbol q2(d);  // coefficient of p_z^{-3}

  // 1/2 Delta V
  SmoothField lap = SmoothField::constant(d, 0.0);
  for (int j = 0; j < d; ++j) {
    MultiIndex a(d);
    a.e[j] = 2;
    lap = lap + V.f.derivative(a);
  }
  q1.add_term(MultiIndex(d), lap.scaled(0.5));

  // -1/2 |grad V|^2
  SmoothField gsq = SmoothField::constant(d, 0.0);
  for (int j = 0; j < d; ++j) {
    SmoothField vj = V.f.derivative(MultiIndex::unit(d, j));
    gsq = gsq + vj * vj;
  }
  q2.add_term(MultiIndex(d), gsq.scaled(-0.5));

  // - sum_{jk} (d_j d_k V) xi_j xi_k   (full double sum)
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      MultiIndex a = MultiIndex::unit(d, j) + MultiIndex::unit(d, k);
      q2.add_term(MultiIndex::unit(d, j) + MultiIndex::unit(d, k), V.f.derivative(a).scaled(-1.0));
    }

  if (!B.is_zero()) {
    // +1/2 |B|^2 with |B|^2 = sum_{jk} B_jk^2 (both orderings)
    SmoothField b2 = (B.b12 * B.b12).scaled(2.0);
    q1.add_term(MultiIndex(d), b2.scaled(0.5));

    // -2 sum_{jkm} B_jk B_jm xi_k xi_m  (= -2 b^2 |xi|^2 in d=2 at each x)
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m) {
        SmoothField c = SmoothField::constant(d, 0.0);
        bool any = false;
        for (int j = 0; j < d; ++j) {
          if (j == k || j == m) continue;
          double sjk = (j < k) ? 1.0 : -1.0;
          double sjm = (j < m) ? 1.0 : -1.0;
          if (k != j && m != j) {
            c = c + (B.b12 * B.b12).scaled(sjk * sjm);
            any = true;
          }
        }
        if (any)
          q2.add_term(MultiIndex::unit(d, k) + MultiIndex::unit(d, m), c.scaled(-2.0));
      }

    // +2/3 sum_{jk} (d_j B_jk) xi_k
    for (int k = 0; k < d; ++k) {
      SmoothField c = SmoothField::constant(d, 0.0);
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        double sjk = (j < k) ? 1.0 : -1.0;
        c = c + B.b12.derivative(MultiIndex::unit(d, j)).scaled(sjk);
      }
      q1.add_term(MultiIndex::unit(d, k), c.scaled(kMagSign * 2.0 / 3.0));
    }

    // -2 sum_{jk} B_jk xi_k (d_j V)
    for (int k = 0; k < d; ++k) {
      SmoothField c = SmoothField::constant(d, 0.0);
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        double sjk = (j < k) ? 1.0 : -1.0;
        c = c + (B.b12 * V.f.derivative(MultiIndex::unit(d, j))).scaled(sjk);
      }
      q2.add_term(MultiIndex::unit(d, k), c.scaled(kMagSign * -2.0));
    }
  }

  out.terms.emplace_back(1, q1);
  out.terms.emplace_back(2, q2);
  return out;
}

ResolventExpansion r1(Cplx z, const ScalarPotential& V, const MagneticField&) {
  ResolventExpansion out;
  out.d = V.d;
  out.z = z;
  out.V = V;
  return out;  // c1(p_z, p_z^{-1}) vanishes identically
}

ResolventExpansion r2(Cplx z, const ScalarPotential& V, const MagneticField& B) {
  return c2_resolvent(z, V, B).power_shift().scaled(-1.0);
}

double g2_symbol(const std::function<double(double, int)>& g, const PolySymbol& F0, const Vec& x,
                 const Vec& xi) {
  int d = F0.dim();
  double p22 = 0.0, p23 = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double fxjk = F0.deriv(x, xi, u(d, j) + u(d, k), zero(d));
      double fkk = F0.deriv(x, xi, zero(d), u(d, j) + u(d, k));
      double fxj_xik = F0.deriv(x, xi, u(d, j), u(d, k));
      double fxk_xij = F0.deriv(x, xi, u(d, k), u(d, j));
      double fxj = F0.deriv(x, xi, u(d, j), zero(d));
      double fxk = F0.deriv(x, xi, u(d, k), zero(d));
      double fij = F0.deriv(x, xi, zero(d), u(d, j));
      double fik = F0.deriv(x, xi, zero(d), u(d, k));
      p22 += 0.125 * (fxj_xik * fxk_xij - fxjk * fkk);
      p23 += (1.0 / 24.0) * (2.0 * fxk_xij * fxj * fik - fxjk * fij * fik - fkk * fxj * fxk);
    }
  double f0 = F0.evaluate(x, xi);
  return p22 * g(f0, 2) + p23 * g(f0, 3);
}

std::vector<Cplx> eval_ck_grid(int k, const SymbolFn& phi, const SymbolFn& psi,
                               const MagneticField& B, const PhaseGrid& grid, Execution exec) {
  long n = grid.points();
  std::vector<Cplx> out(n);
  int d = grid.d;
  auto point = [&](long idx, Vec& x, Vec& xi) {
    long r = idx;
    for (int j = d - 1; j >= 0; --j) {
      xi[j] = grid.xi[j].point(r % grid.xi[j].n);
      r /= grid.xi[j].n;
    }
    for (int j = d - 1; j >= 0; --j) {
      x[j] = grid.x[j].point(r % grid.x[j].n);
      r /= grid.x[j].n;
    }
  };
  auto body = [&](long i) {
    Vec x{0, 0}, xi{0, 0};
    point(i, x, xi);
    switch (k) {
      case 0: out[i] = c0(phi, psi, x, xi); break;
      case 1: out[i] = c1(phi, psi, B, x, xi); break;
      default: out[i] = c2(phi, psi, B, x, xi); break;
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) body(i);
  } else {
    for (long i = 0; i < n; ++i) body(i);
  }
  return out;
}

}  // namespace magtrace
