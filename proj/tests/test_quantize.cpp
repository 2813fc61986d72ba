#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "magtrace/quantize.hpp"
#include "magtrace/spectral.hpp"

using namespace magtrace;

TEST_CASE("1D harmonic oscillator spectrum: hbar(2n+1)") {
  ScalarPotential V = make_harmonic(1);
  double hbar = 0.1;
  GridSpec grid{1, 3.5, 1401, 4};
  grid.memory_cap_rows = 2000;

  std::vector<double> ev = eigensolve_banded(build_hamiltonian_banded(V, hbar, grid));
  for (int n = 0; n < 8; ++n) {
    double exact = hbar * (2 * n + 1);
    CHECK(ev[n] == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("banded fast path equals the dense 1D assembly") {
  ScalarPotential V = make_quartic(1, 0.25);
  double hbar = 0.2;
  GridSpec grid{1, 2.5, 301, 4};
  MagneticOperatorMatrix H = build_hamiltonian(V, make_zero_gauge(1), hbar, grid);
  SpectralData dense = eigensolve(H, 0.0);
  std::vector<double> band = eigensolve_banded(build_hamiltonian_banded(V, hbar, grid));
  REQUIRE(band.size() == dense.evals.size());
  for (int n = 0; n < 20; ++n)
    CHECK(band[n] == doctest::Approx(dense.evals[n]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("order-4 stencil converges much faster than order-2") {
  ScalarPotential V = make_harmonic(1);
  double hbar = 0.2;
  double exact = hbar;  // ground state
  GridSpec g2{1, 3.0, 241, 2}, g4{1, 3.0, 241, 4};
  double e2 = eigensolve_banded(build_hamiltonian_banded(V, hbar, g2))[0];
  double e4 = eigensolve_banded(build_hamiltonian_banded(V, hbar, g4))[0];
  INFO("order-2 error ", std::abs(e2 - exact), ", order-4 error ", std::abs(e4 - exact));
  CHECK(std::abs(e4 - exact) < 0.02 * std::abs(e2 - exact));
}

TEST_CASE("1D pure-gauge field leaves the spectrum invariant (complex path)") {
  // in 1D every vector potential is a gradient, so the Peierls phases are a
  // unitary conjugation and the eigenvalues must match the zero-gauge operator
  ScalarPotential V = make_harmonic(1);
  double hbar = 0.25;
  GridSpec grid{1, 3.0, 241, 4};
  VectorPotential A;
  A.d = 1;
  A.comp.push_back(separable_field(1, {monomial1d(0.7, 1)}));

  MagneticOperatorMatrix H0 = build_hamiltonian(V, make_zero_gauge(1), hbar, grid);
  MagneticOperatorMatrix HA = build_hamiltonian(V, A, hbar, grid);
  CHECK(HA.M.imag().cwiseAbs().maxCoeff() > 1e-3);  // genuinely complex entries
  SpectralData s0 = eigensolve(H0, 0.0);
  SpectralData sA = eigensolve(HA, 0.0);
  for (int n = 0; n < 12; ++n)
    CHECK(sA.evals[n] == doctest::Approx(s0.evals[n]).epsilon(1e-10));
}

TEST_CASE("gauge covariance: conjugation maps symmetric to landau gauge") {
  double b = 1.0, hbar = 0.3;
  ScalarPotential V = make_harmonic(2);
  GridSpec grid{2, 2.2, 20, 4};
  MagneticOperatorMatrix Hsym = build_hamiltonian(V, make_symmetric_gauge(b), hbar, grid);
  MagneticOperatorMatrix Hlan = build_hamiltonian(V, make_landau_gauge(b), hbar, grid);

  // A_landau = A_sym + grad(b x1 x2 / 2)
  GaugeFunction phi{2, separable_field(2, {monomial1d(0.5 * b, 1), monomial1d(1.0, 1)})};
  MagneticOperatorMatrix conj = gauge_conjugate(Hsym, phi);
  double scale = Hlan.M.cwiseAbs().maxCoeff();
  CHECK((conj.M - Hlan.M).cwiseAbs().maxCoeff() < 1e-12 * scale);

  // and the spectra agree even without conjugating
  SpectralData ss = eigensolve(Hsym, 0.0);
  SpectralData sl = eigensolve(Hlan, 0.0);
  for (int n = 0; n < 10; ++n)
    CHECK(ss.evals[n] == doctest::Approx(sl.evals[n]).epsilon(1e-10));
}

TEST_CASE("2D constant-field harmonic well reproduces the closed-form spectrum") {
  // H = -hbar^2 D_A + |x|^2 with B = b: levels
  // 2 hbar sqrt(1 + b^2/4) (2 n_r + |m| + 1) - hbar b m
  double b = 1.0, hbar = 0.6;
  ScalarPotential V = make_harmonic(2);
  GridSpec grid{2, 3.6, 49, 4};
  MagneticOperatorMatrix H = build_hamiltonian(V, make_symmetric_gauge(b), hbar, grid);
  SpectralData s = eigensolve(H, 0.0);

  double Om = std::sqrt(1.0 + 0.25 * b * b);
  std::vector<double> exact;
  for (int nr = 0; nr <= 3; ++nr)
    for (int m = -4; m <= 4; ++m)
      exact.push_back(2.0 * hbar * Om * (2 * nr + std::abs(m) + 1) - hbar * b * m);
  std::sort(exact.begin(), exact.end());
  for (int n = 0; n < 6; ++n) {
    INFO("level ", n, ": numeric ", s.evals[n], " exact ", exact[n]);
    CHECK(s.evals[n] == doctest::Approx(exact[n]).epsilon(3e-3));
  }
}

TEST_CASE("two-stage quantization matches the closed-form gaussian kernel") {
  GridSpec grid{1, 2.5, 101, 4};
  double hbar = 0.3;
  VectorPotential A0 = make_zero_gauge(1);
  GaussianSymbol phi{1, separable_field(1, {gaussian1d(1.0)}), {0.4, 0.0}, 1.0};

  MagneticOperatorMatrix closed = build_op_kernel(phi, A0, hbar, grid);
  SymbolFn f = as_symbol(phi);
  MagneticOperatorMatrix numeric = build_op_kernel_numeric(
      [&](const Vec& m, const Vec& xi) { return f(m, xi); }, 1, A0, hbar, grid, -5.1, 5.9, 40,
      8.0 * hbar);
  double rel = (closed.M - numeric.M).norm() / closed.M.norm();
  INFO("closed vs two-stage relative error ", rel);
  CHECK(rel < 5e-6);

  // de-quantization returns the symbol at interior phase-space points
  long mid = 50;  // x = 0
  for (double xiv : {-0.2, 0.4, 1.1}) {
    Cplx sym = weyl_symbol_at(closed, A0, mid, Vec{xiv, 0.0});
    double want = phi.evaluate(grid.point(mid), Vec{xiv, 0.0});
    CHECK(std::abs(sym - Cplx(want)) < 2e-4);
  }
}

TEST_CASE("matrix dump / load round trip") {
  ScalarPotential V = make_harmonic(2);
  GridSpec grid{2, 2.0, 10, 4};
  MagneticOperatorMatrix H = build_hamiltonian(V, make_symmetric_gauge(0.8), 0.4, grid);
  std::string path = "/tmp/magtrace_test_dump.bin";
  dump_matrix(H, path);
  MagneticOperatorMatrix L = load_matrix(path);
  std::remove(path.c_str());
  CHECK(L.grid.d == 2);
  CHECK(L.grid.N == 10);
  CHECK(L.hbar == 0.4);
  CHECK(L.grid.L == 2.0);
  CHECK((L.M - H.M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("grid validation and the resolution warning") {
  GridSpec bad1{1, 2.0, 3, 4};
  CHECK_THROWS(bad1.validate());
  GridSpec bad2{2, 2.0, 200, 4};  // 40000 rows > default cap
  CHECK_THROWS(bad2.validate());
  GridSpec bad3{1, 2.0, 64, 3};
  CHECK_THROWS(bad3.validate());

  // a deliberately coarse grid for fast states must set the warning flag
  ScalarPotential V = make_harmonic(1);
  GridSpec coarse{1, 3.0, 31, 4};
  MagneticOperatorMatrix H = build_hamiltonian(V, make_zero_gauge(1), 0.05, coarse, 1.0);
  CHECK(H.resolution_warning);
  GridSpec fine{1, 3.0, 1201, 4};
  MagneticOperatorMatrix H2 = build_hamiltonian(V, make_zero_gauge(1), 0.05, fine, 0.2);
  CHECK(!H2.resolution_warning);
}
