#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magtrace/quadrature.hpp"
#include "magtrace/semiclassics.hpp"

using namespace magtrace;

TEST_CASE("T0 in closed form: radial reduction of the harmonic well") {
  TestFunction g{0.55, 0.35};
  QuadSpec q{1.2, 961, 48};

  // d=1: int dx dxi g(xi^2 + x^2) = pi int g(u) du
  ScalarPotential V1 = make_harmonic(1);
  double want1 = M_PI * gauss_integrate_composite([&](double u) { return g(u); }, g.support_lo(),
                                                  g.support_hi(), 48, 8);
  CHECK(T0(g, V1, q) == doctest::Approx(want1).epsilon(1e-8));

  // d=2: int dx dxi g(|xi|^2 + |x|^2) = pi^2 int u g(u) du
  ScalarPotential V2 = make_harmonic(2);
  QuadSpec q2{1.2, 161, 48};
  double want2 = M_PI * M_PI *
                 gauss_integrate_composite([&](double u) { return u * g(u); }, g.support_lo(),
                                           g.support_hi(), 48, 8);
  CHECK(T0(g, V2, q2) == doctest::Approx(want2).epsilon(1e-8));
}

TEST_CASE("T0 against the direct phase-space tensor quadrature") {
  TestFunction g{0.55, 0.35};
  ScalarPotential V = make_quartic(1, 0.25);
  QuadSpec q{1.1, 481, 120};
  double radial = T0(g, V, q);
  double direct = phase_space_integral(
      [&](const Vec& x, const Vec& xi) { return g(xi[0] * xi[0] + V(x)); }, 1, q, 0.96);
  CHECK(radial == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("T2 against the direct quadrature, and the Hessian form at B = 0") {
  TestFunction g{0.55, 0.35};
  ScalarPotential V = make_quartic(1, 0.25);
  QuadSpec q{1.1, 961, 48};
  MagneticField B0 = make_zero_field(1);
  double hi = g.support_hi();

  double t2 = T2(g, V, B0, q);
  // independent oracle: trapezoid in x, per-x composite rule over the exact
  // xi-interval (a fixed global xi grid cannot resolve the spiky g'')
  double sum = 0.0, h = 2.0 * q.L / (q.nx - 1);
  for (int i = 0; i < q.nx; ++i) {
    double x = -q.L + h * i, v = V(Vec{x, 0.0});
    if (v >= hi) continue;
    double xm = std::sqrt(hi - v);
    double inner = gauss_integrate_composite(
        [&](double xi) { return g.deriv(xi * xi + v, 2); }, -xm, xm, 48, 12);
    sum += ((i == 0 || i == q.nx - 1) ? 0.5 : 1.0) * V.laplacian(Vec{x, 0.0}) * inner * h;
  }
  double direct = -sum / 12.0;
  INFO("T2 ", t2, " direct ", direct);
  CHECK(t2 == doctest::Approx(direct).epsilon(1e-5).scale(1.0));

  // the Hessian-contraction form reduces to T2 for B = 0
  double hr = T2_hr(g, V, q);
  INFO("T2 ", t2, " vs Hessian form ", hr);
  CHECK(hr == doctest::Approx(t2).epsilon(1e-5).scale(1.0));

  // same identity in d = 2 (pointwise in x, so a coarse x-grid still decides)
  ScalarPotential V2 = make_quartic(2, 0.25);
  QuadSpec q2{1.1, 61, 48};
  double t2_2 = T2(g, V2, make_zero_field(2), q2);
  double hr_2 = T2_hr(g, V2, q2);
  INFO("2D: T2 ", t2_2, " vs Hessian form ", hr_2);
  CHECK(hr_2 == doctest::Approx(t2_2).epsilon(1e-5).scale(1.0));
}

TEST_CASE("magnetic T2 shifts by the field-strength term") {
  TestFunction g{0.55, 0.35};
  ScalarPotential V = make_harmonic(2);
  QuadSpec q{1.2, 241, 48};
  MagneticField B = make_constant_field(0.8);
  double with_b = T2(g, V, B, q);
  double without = T2(g, V, make_zero_field(2), q);
  // for constant b the difference is -(b^2/12) int dx  pi int_0^{hi-v} g''(u+v) du
  double hi = g.support_hi();
  double sum = 0.0, h = 2.0 * q.L / (q.nx - 1);
  for (int i = 0; i < q.nx; ++i)
    for (int j = 0; j < q.nx; ++j) {
      double v = V(Vec{-q.L + h * i, -q.L + h * j});
      if (v >= hi) continue;
      double w = ((i == 0 || i == q.nx - 1) ? 0.5 : 1.0) * ((j == 0 || j == q.nx - 1) ? 0.5 : 1.0);
      sum += w * gauss_integrate_composite([&](double u) { return g.deriv(u + v, 2); }, 0.0,
                                           hi - v, 48, 8);
    }
  double diff_direct = -0.64 / 12.0 * M_PI * sum * h * h;
  INFO("shift ", with_b - without, " direct ", diff_direct);
  CHECK(with_b - without == doctest::Approx(diff_direct).epsilon(1e-5).scale(0.01));
}

TEST_CASE("quadrature box leaks are detected") {
  TestFunction g{0.55, 0.35};
  ScalarPotential V = make_harmonic(1);
  QuadSpec small{0.8, 81, 32};  // V(0.8) = 0.64 < supp hi = 0.9
  CHECK_THROWS_WITH_AS(T0(g, V, small), doctest::Contains("box too small"), std::runtime_error);

  // test functions reaching Sigma_V are rejected
  ScalarPotential W = make_gaussian_well(1, 2.0, 1.0);  // Sigma = 0
  CHECK_THROWS(T0(g, W, small));
  TestFunction gneg{-0.55, 0.3};
  QuadSpec qn{6.0, 301, 32};
  CHECK(T0(gneg, W, qn) > 0.0);  // well states exist below zero
}

TEST_CASE("resolve_grid: auto resolution scales like 1/hbar and clamps") {
  ScalarPotential V = make_harmonic(1);
  GridPolicy pol{2.0, 0, 4, 5000, 12.0};
  GridSpec a = resolve_grid(pol, 1, 0.2, 1.0, V);
  GridSpec b = resolve_grid(pol, 1, 0.1, 1.0, V);
  CHECK(b.N > 1.9 * a.N);
  CHECK(b.N < 2.1 * a.N);
  GridPolicy tight = pol;
  tight.max_N = 100;
  CHECK(resolve_grid(tight, 1, 0.01, 1.0, V).N == 100);
  GridPolicy fixed = pol;
  fixed.N = 321;
  CHECK(resolve_grid(fixed, 1, 0.05, 1.0, V).N == 321);
}

TEST_CASE("synthetic sweep: the fit recovers planted coefficients") {
  SweepTable table;
  for (double hb : {0.5, 0.4, 0.3, 0.25, 0.2, 0.15, 0.1}) {
    SweepRow r;
    r.hbar = hb;
    r.value = 3.0 + 0.5 * hb * hb;
    table.rows.push_back(r);
  }
  FitResult even = fit_expansion(table, 3, true);
  CHECK(even.coeffs[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(even.coeffs[1] == 0.0);
  CHECK(even.coeffs[2] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(even.residual < 1e-10);

  // full (odd+even) basis on data with an odd term
  for (auto& r : table.rows) r.value = 1.0 + 0.1 * r.hbar + 0.02 * std::pow(r.hbar, 3);
  FitResult full = fit_expansion(table, 3, false);
  CHECK(full.coeffs[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(full.coeffs[1] == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(full.coeffs[3] == doctest::Approx(0.02).epsilon(1e-4));

  SweepTable tiny;
  tiny.rows.assign(table.rows.begin(), table.rows.begin() + 3);
  CHECK_THROWS(fit_expansion(tiny, 3, false));
}

TEST_CASE("hbar sweep on the 1D harmonic well approaches T0") {
  ScalarPotential V = make_harmonic(1);
  VectorPotential A0 = make_zero_gauge(1);
  TestFunction g{0.55, 0.35};
  GridPolicy pol{2.2, 0, 4, 3000, 14.0};
  SweepTable t = hbar_sweep(V, A0, g, {0.2, 0.1}, 1.0, pol);
  REQUIRE(t.rows.size() == 2);
  CHECK(!t.rows[0].failed);
  CHECK(!t.rows[1].failed);

  QuadSpec q{1.2, 961, 48};
  double t0 = T0(g, V, q);
  double e0 = std::abs(t.rows[0].value - t0);
  double e1 = std::abs(t.rows[1].value - t0);
  INFO("T0 ", t0, " sweep values ", t.rows[0].value, " ", t.rows[1].value);
  CHECK(e0 < 0.12 * std::abs(t0));
  CHECK(e1 < 0.3 * e0);  // remainder shrinks roughly like hbar^2
}

TEST_CASE("agmon comparison: cutoff far above supp g leaves traces untouched") {
  ScalarPotential V = make_harmonic(1);
  VectorPotential A0 = make_zero_gauge(1);
  TestFunction g{0.55, 0.35};
  GridPolicy pol{2.6, 0, 4, 3000, 14.0};
  AgmonReport rep = agmon_compare(V, A0, 1.0, g, {0.2, 0.1}, pol, 4.4);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].delta < 1e-5);
  CHECK(rep.rows[1].delta < rep.rows[0].delta + 1e-12);

  TestFunction bad{1.2, 0.3};  // support exceeds E = 1
  CHECK_THROWS(agmon_compare(V, A0, 1.0, bad, {0.2}, pol, 4.4));
}
