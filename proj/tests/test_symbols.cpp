#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "magtrace/quadrature.hpp"
#include "magtrace/symbols.hpp"

using namespace magtrace;

namespace {

template <typename F>
Cplx cfd1(F&& f, double t, double h = 1e-5) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

void check_close(Cplx got, Cplx want, double tol) {
  CHECK(std::abs(got - want) <= tol * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_CASE("poly symbol xi-calculus is exact") {
  ScalarPotential V = make_harmonic(2);
  PolySymbol F = hamiltonian_symbol(V);
  Vec x{0.5, -0.3}, xi{1.2, 0.7};
  double f0 = xi[0] * xi[0] + xi[1] * xi[1] + V(x);
  CHECK(F.evaluate(x, xi) == doctest::Approx(f0).epsilon(1e-14));
  CHECK(F.degree() == 2);

  MultiIndex e1 = MultiIndex::unit(2, 0), e2 = MultiIndex::unit(2, 1);
  CHECK(F.deriv(x, xi, MultiIndex(2), e1) == doctest::Approx(2.0 * xi[0]).epsilon(1e-14));
  CHECK(F.deriv(x, xi, MultiIndex(2), e1 + e1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(F.deriv(x, xi, MultiIndex(2), e1 + e2) == doctest::Approx(0.0).scale(1.0));
  CHECK(F.deriv(x, xi, e1, MultiIndex(2)) == doctest::Approx(2.0 * x[0]).epsilon(1e-14));
  CHECK(F.deriv(x, xi, e1, e1) == doctest::Approx(0.0).scale(1.0));

  // product symbol evaluates to the product
  PolySymbol P = F * F;
  CHECK(P.evaluate(x, xi) == doctest::Approx(f0 * f0).epsilon(1e-13));
  CHECK(P.degree() == 4);
  // d_xi1 (F^2) = 2 F d_xi1 F
  CHECK(P.deriv(x, xi, MultiIndex(2), e1) ==
        doctest::Approx(2.0 * f0 * 2.0 * xi[0]).epsilon(1e-13));
}

TEST_CASE("resolvent derivative expansion: base case and induction closure") {
  ScalarPotential V = make_quartic(2, 0.25);
  Cplx z(0.5, 0.7);
  Vec x{0.4, -0.6}, xi{0.9, -0.2};

  // base case equals 1/p_z
  ResolventExpansion base = pz_derivative(V, MultiIndex(2), MultiIndex(2), z);
  Cplx pz = Cplx(xi[0] * xi[0] + xi[1] * xi[1] + V(x)) - z;
  check_close(base.evaluate(x, xi), 1.0 / pz, 1e-14);

  // each additional x- or xi-derivative matches a finite difference of the
  // lower-order expansion, through total order 4
  std::vector<std::pair<MultiIndex, MultiIndex>> orders;
  for (const MultiIndex& a : multi_indices_below(MultiIndex(2, {2, 1})))
    for (const MultiIndex& b : multi_indices_below(MultiIndex(2, {1, 2})))
      if (a.order() + b.order() <= 3) orders.emplace_back(a, b);

  for (const auto& [a, b] : orders) {
    ResolventExpansion lower = pz_derivative(V, a, b, z);
    for (int j = 0; j < 2; ++j) {
      ResolventExpansion up_x = pz_derivative(V, a + MultiIndex::unit(2, j), b, z);
      Cplx fd = cfd1(
          [&](double t) {
            Vec xs = x;
            xs[j] = t;
            return lower.evaluate(xs, xi);
          },
          x[j]);
      check_close(up_x.evaluate(x, xi), fd, 5e-6);

      ResolventExpansion up_xi = pz_derivative(V, a, b + MultiIndex::unit(2, j), z);
      Cplx fdxi = cfd1(
          [&](double t) {
            Vec xis = xi;
            xis[j] = t;
            return lower.evaluate(x, xis);
          },
          xi[j]);
      check_close(up_xi.evaluate(x, xi), fdxi, 5e-6);
    }
  }
}

TEST_CASE("resolvent expansion algebra: power shift and sums") {
  ScalarPotential V = make_harmonic(1);
  Cplx z(0.3, 0.4);
  ResolventExpansion r = pz_derivative(V, MultiIndex(1, {1}), MultiIndex(1, {1}), z);
  Vec x{0.7, 0.0}, xi{0.5, 0.0};
  Cplx pz = Cplx(xi[0] * xi[0] + V(x)) - z;
  check_close(r.power_shift().evaluate(x, xi), r.evaluate(x, xi) / pz, 1e-13);
  check_close((r + r.scaled(-1.0)).evaluate(x, xi), 0.0, 1e-13);
  check_close(r.scaled(2.5).evaluate(x, xi), 2.5 * r.evaluate(x, xi), 1e-13);
}

TEST_CASE("gaussian symbol: derivatives and closed-form fourier kernel") {
  GaussianSymbol g{1, separable_field(1, {gaussian1d(1.4)}), {0.6, 0.0}, 0.8};
  Vec x{0.3, 0.0};
  MultiIndex e1 = MultiIndex::unit(1, 0), z1(1);

  for (double xiv : {-0.4, 0.6, 1.3}) {
    Vec xi{xiv, 0.0};
    double want = g.amp(x) * std::exp(-std::pow(xiv - 0.6, 2) / (2.0 * 0.8 * 0.8));
    CHECK(g.evaluate(x, xi) == doctest::Approx(want).epsilon(1e-13));
    double fdx = (g.evaluate(Vec{x[0] + 1e-5, 0.0}, xi) - g.evaluate(Vec{x[0] - 1e-5, 0.0}, xi)) /
                 2e-5;
    CHECK(g.deriv(x, xi, e1, z1) == doctest::Approx(fdx).epsilon(5e-6).scale(1.0));
    double fdxi = (g.evaluate(x, Vec{xiv + 1e-5, 0.0}) - g.evaluate(x, Vec{xiv - 1e-5, 0.0})) /
                  2e-5;
    CHECK(g.deriv(x, xi, z1, e1) == doctest::Approx(fdxi).epsilon(5e-6).scale(1.0));
    double fdxi2 = (g.deriv(x, Vec{xiv + 1e-5, 0.0}, z1, e1) -
                    g.deriv(x, Vec{xiv - 1e-5, 0.0}, z1, e1)) /
                   2e-5;
    CHECK(g.deriv(x, xi, z1, e1 + e1) == doctest::Approx(fdxi2).epsilon(5e-6).scale(1.0));
  }

  // (2 pi hbar)^{-1} int e^{i xi v / hbar} g(x, xi) dxi against the closed form
  double hbar = 0.3;
  for (double v : {0.0, 0.25, 0.6}) {
    auto re = [&](double xiv) {
      return g.evaluate(x, Vec{xiv, 0.0}) * std::cos(xiv * v / hbar);
    };
    auto im = [&](double xiv) {
      return g.evaluate(x, Vec{xiv, 0.0}) * std::sin(xiv * v / hbar);
    };
    Cplx num(gauss_integrate(re, 0.6 - 9.0, 0.6 + 9.0, 120),
             gauss_integrate(im, 0.6 - 9.0, 0.6 + 9.0, 120));
    num /= 2.0 * M_PI * hbar;
    check_close(g.fourier_kernel(x, Vec{v, 0.0}, hbar), num, 1e-10);
  }
}

TEST_CASE("type-erased symbols agree with their sources") {
  ScalarPotential V = make_harmonic(2);
  Cplx z(0.5, 0.6);
  SymbolFn p = pz_symbol(V, z);
  SymbolFn pinv = pz_inverse_symbol(V, z, 2);
  Vec x{0.4, 0.2}, xi{-0.3, 0.8};
  Cplx pz = Cplx(xi[0] * xi[0] + xi[1] * xi[1] + V(x)) - z;
  check_close(p(x, xi), pz, 1e-14);
  check_close(pinv(x, xi), 1.0 / pz, 1e-14);
  // product rule sanity: d_xi1 (p * p^{-1}) = 0
  MultiIndex e1 = MultiIndex::unit(2, 0), z2(2);
  Cplx lhs = p.deriv(x, xi, z2, e1) * pinv(x, xi) + p(x, xi) * pinv.deriv(x, xi, z2, e1);
  check_close(lhs, 0.0, 1e-13);
  Cplx lhs_x = p.deriv(x, xi, e1, z2) * pinv(x, xi) + p(x, xi) * pinv.deriv(x, xi, e1, z2);
  check_close(lhs_x, 0.0, 1e-13);

  // PolySymbol round trip through as_symbol
  PolySymbol F = hamiltonian_symbol(V);
  SymbolFn sf = as_symbol(F);
  check_close(sf(x, xi), Cplx(F.evaluate(x, xi)), 1e-14);
  check_close(sf.deriv(x, xi, e1, e1), Cplx(F.deriv(x, xi, e1, e1)), 1e-14);
  CHECK_THROWS(pinv.deriv(x, xi, MultiIndex(2, {3, 0}), z2));
}
