#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "magtrace/exec.hpp"
#include "magtrace/profiles.hpp"
#include "magtrace/quantize.hpp"

namespace magtrace {

// Compactly supported C^inf test function: a scaled bump around `center` with
// half-width `width`; analytic derivatives up to order 4.
struct TestFunction {
  double center = 0.5;
  double width = 0.3;
  double scale = 1.0;

  double operator()(double t) const { return deriv(t, 0); }
  double deriv(double t, int k) const;
  double support_lo() const { return center - width; }
  double support_hi() const { return center + width; }

  std::function<double(double, int)> as_fn() const {
    TestFunction g = *this;
    return [g](double t, int k) { return g.deriv(t, k); };
  }
};

TestFunction make_test_function(const std::string& profile, double center, double width,
                                double scale = 1.0);

// Almost-analytic extension of g to order N with a smooth cutoff chi in the
// imaginary direction; dbar decays like |mu|^N near the real axis.
struct AlmostAnalyticExtension {
  TestFunction g;
  int N = 3;              // Taylor order, needs g^{(N+1)}, so N <= 3
  double mu_width = 1.0;  // chi = 1 on |mu| <= mu_width/2, 0 beyond mu_width

  Cplx value(double lam, double mu) const;
  Cplx dbar(double lam, double mu) const;  // (1/2)(d_lam + i d_mu) extension
  double chi(double mu) const;
  double chi_prime(double mu) const;
};

struct SpectralData {
  std::vector<double> evals;            // all eigenvalues, ascending
  std::optional<Eigen::MatrixXcd> vecs; // columns, when requested
  double hbar = 1.0;
  GridSpec grid;
  double E_cap = 0.0;
  bool cap_boundary_flag = false;  // eigenvalue suspiciously close to E_cap
};

// Dense Hermitian eigensolve.  Fast paths: real-symmetric divide and conquer,
// and a banded solver for 1D zero-gauge stencils.
SpectralData eigensolve(const MagneticOperatorMatrix& H, double E_cap, bool want_vectors = false);

// eigenvalues of a real-symmetric band matrix (lower band storage, col-major)
std::vector<double> eigensolve_banded(const Eigen::MatrixXd& ab);

// sum over eigenvalues of g; requires supp g below E_cap
double trace_g(const SpectralData& s, const TestFunction& g);

struct HSQuadrature {
  int n_lambda = 12;   // Gauss-Legendre nodes per lambda panel
  int n_mu = 24;       // Gauss-Legendre nodes per mu half-axis
  double eps = 0.01;   // |mu| >= eps truncation
  // composite lambda panels over supp(g~), cosine-graded toward the support
  // edges where the high derivatives of a bump concentrate
  int n_panels = 12;
};

// Dynkin-Helffer-Sjostrand image g(H) via quadrature of
// -(1/pi) int dbar g~ (lam + i mu - H)^{-1} over |mu| >= eps.
Eigen::MatrixXcd hs_apply(const MagneticOperatorMatrix& H, const AlmostAnalyticExtension& ext,
                          const HSQuadrature& quad, Execution exec = Execution::parallel);

// Richardson extrapolation of the eps ladder assuming error ~ eps^N
Eigen::MatrixXcd hs_apply_extrapolated(const MagneticOperatorMatrix& H,
                                       const AlmostAnalyticExtension& ext, HSQuadrature quad,
                                       const std::vector<double>& eps_ladder,
                                       Execution exec = Execution::parallel);

// spectral-theorem reference for g(H) (dense eigendecomposition)
Eigen::MatrixXcd spectral_apply(const MagneticOperatorMatrix& H, const TestFunction& g);

}  // namespace magtrace
