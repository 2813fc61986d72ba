#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "magtrace/quantize.hpp"
#include "magtrace/spectral.hpp"

using namespace magtrace;

TEST_CASE("test function profile and derivatives") {
  TestFunction g = make_test_function("bump", 0.55, 0.35, 2.0);
  CHECK(g.support_lo() == doctest::Approx(0.2));
  CHECK(g.support_hi() == doctest::Approx(0.9));
  CHECK(g(0.55) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(g(0.1) == 0.0);
  CHECK(g(1.0) == 0.0);
  for (int k = 1; k <= 4; ++k)
    for (double t : {0.3, 0.52, 0.7, 0.85}) {
      double fd = (g.deriv(t + 1e-5, k - 1) - g.deriv(t - 1e-5, k - 1)) / 2e-5;
      CHECK(g.deriv(t, k) == doctest::Approx(fd).epsilon(5e-6).scale(1.0));
    }
  CHECK_THROWS(make_test_function("gaussian", 0.5, 0.3));
}

TEST_CASE("almost-analytic extension: restriction, cutoff, dbar consistency") {
  TestFunction g{0.55, 0.35};
  AlmostAnalyticExtension ext{g, 3, 1.0};

  // restriction to the real axis is g itself
  for (double t : {0.25, 0.5, 0.75})
    CHECK(ext.value(t, 0.0).real() == doctest::Approx(g(t)).epsilon(1e-14));

  // cutoff plateau and support
  CHECK(ext.chi(0.3) == 1.0);
  CHECK(ext.chi(-0.4) == 1.0);
  CHECK(ext.chi(1.1) == 0.0);
  CHECK(ext.chi(0.75) > 0.0);
  CHECK(ext.chi(0.75) < 1.0);
  CHECK(ext.chi(0.75) == ext.chi(-0.75));
  double fd = (ext.chi(0.75 + 1e-6) - ext.chi(0.75 - 1e-6)) / 2e-6;
  CHECK(ext.chi_prime(0.75) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
  CHECK(ext.chi_prime(-0.75) == doctest::Approx(-ext.chi_prime(0.75)).epsilon(1e-13));

  // dbar really is (1/2)(d_lam + i d_mu) of the extension, including in the
  // cutoff transition region
  for (double lam : {0.35, 0.6})
    for (double mu : {0.2, -0.3, 0.72, -0.8}) {
      double h = 1e-5;
      Cplx dl = (ext.value(lam + h, mu) - ext.value(lam - h, mu)) / (2.0 * h);
      Cplx dm = (ext.value(lam, mu + h) - ext.value(lam, mu - h)) / (2.0 * h);
      Cplx want = 0.5 * (dl + Cplx(0.0, 1.0) * dm);
      CHECK(std::abs(ext.dbar(lam, mu) - want) < 2e-6 * std::max(1.0, std::abs(want)));
    }

  // near the real axis dbar vanishes to order N
  double r1 = std::abs(ext.dbar(0.5, 1e-2));
  double r2 = std::abs(ext.dbar(0.5, 1e-3));
  CHECK(r2 < 2e-3 * r1);  // ~ 10^{-N}

  AlmostAnalyticExtension bad{g, 4, 1.0};
  CHECK_THROWS(bad.dbar(0.5, 0.1));
}

TEST_CASE("eigensolve rejects non-hermitian input and flags cap grazing") {
  MagneticOperatorMatrix H;
  H.grid = GridSpec{1, 1.0, 4, 4};
  H.M = Eigen::MatrixXcd::Zero(4, 4);
  H.M(0, 1) = 1.0;  // not symmetric
  CHECK_THROWS(eigensolve(H, 0.0));

  ScalarPotential V = make_harmonic(1);
  GridSpec grid{1, 3.0, 121, 4};
  MagneticOperatorMatrix Hh = build_hamiltonian(V, make_zero_gauge(1), 0.3, grid);
  SpectralData s = eigensolve(Hh, 0.0);
  CHECK(!s.cap_boundary_flag);
  SpectralData s2 = eigensolve(Hh, s.evals[3] + 1e-8);
  CHECK(s2.cap_boundary_flag);
}

TEST_CASE("trace_g: sums over the spectrum, guards the cap") {
  ScalarPotential V = make_harmonic(1);
  GridSpec grid{1, 3.0, 121, 4};
  MagneticOperatorMatrix H = build_hamiltonian(V, make_zero_gauge(1), 0.3, grid);
  SpectralData s = eigensolve(H, 0.0);
  TestFunction g{0.55, 0.35};
  double direct = 0.0;
  for (double e : s.evals) direct += g(e);
  CHECK(trace_g(s, g) == doctest::Approx(direct));

  SpectralData capped = eigensolve(H, 0.8);
  capped.E_cap = 0.8;
  CHECK_THROWS(trace_g(capped, g));  // support reaches 0.9 > E_cap
}

TEST_CASE("helffer-sjostrand image converges to the spectral-theorem reference") {
  ScalarPotential V = make_harmonic(1);
  GridSpec grid{1, 2.2, 81, 4};
  double hbar = 0.3;
  MagneticOperatorMatrix H = build_hamiltonian(V, make_zero_gauge(1), hbar, grid);
  TestFunction g{0.55, 0.35};
  AlmostAnalyticExtension ext{g, 3, 1.0};
  Eigen::MatrixXcd ref = spectral_apply(H, g);
  double refn = ref.norm();

  // the eps-truncation error of a low-order extension is clearly visible, so
  // the ladder must be monotone for N = 1
  AlmostAnalyticExtension ext1{g, 1, 1.0};
  HSQuadrature quad{12, 24, 0.04};
  double d1_coarse = (hs_apply(H, ext1, quad) - ref).norm() / refn;
  quad.eps = 0.01;
  double d1_fine = (hs_apply(H, ext1, quad) - ref).norm() / refn;
  INFO("N=1 ladder: eps 0.04 -> ", d1_coarse, ", eps 0.01 -> ", d1_fine);
  CHECK(d1_fine < 0.3 * d1_coarse);

  // high-order extension with extrapolation reaches the target accuracy and
  // beats the low-order one at equal cost
  Eigen::MatrixXcd extr = hs_apply_extrapolated(H, ext, quad, {0.04, 0.02, 0.01});
  double d_extr = (extr - ref).norm() / refn;
  INFO("N=3 extrapolated: ", d_extr);
  CHECK(d_extr < 1e-3);
  CHECK(d_extr < d1_fine);

  // trace consistency against the eigenvalue sum
  SpectralData s = eigensolve(H, 0.0);
  double tr = trace_g(s, g);
  CHECK(std::abs(extr.trace().real() - tr) < 1e-3 * std::max(1.0, std::abs(tr)));

  CHECK_THROWS(hs_apply_extrapolated(H, ext, quad, {}));
  HSQuadrature badq{10, 10, 2.0};  // eps beyond the mu support
  CHECK_THROWS(hs_apply(H, ext, badq));
}

TEST_CASE("test function supported below the spectrum yields the zero operator") {
  ScalarPotential V = make_harmonic(1);
  GridSpec grid{1, 2.2, 81, 4};
  MagneticOperatorMatrix H = build_hamiltonian(V, make_zero_gauge(1), 0.3, grid);
  TestFunction g{-0.5, 0.25};  // support [-0.75, -0.25], spectrum starts near 0.3
  AlmostAnalyticExtension ext{g, 3, 1.0};
  Eigen::MatrixXcd out = hs_apply_extrapolated(H, ext, HSQuadrature{12, 24, 0.0}, {0.04, 0.02});
  CHECK(out.norm() < 1e-6 * H.M.rows());
}
