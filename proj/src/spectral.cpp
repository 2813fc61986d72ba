#include "magtrace/spectral.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

#include "magtrace/quadrature.hpp"

namespace magtrace {

double TestFunction::deriv(double t, int k) const {
  BumpProfile b{center, width};
  return scale * b.deriv(t, k);
}

TestFunction make_test_function(const std::string& profile, double center, double width,
                                double scale) {
  if (profile != "bump")
    throw std::runtime_error("make_test_function: unknown profile '" + profile + "'");
  return TestFunction{center, width, scale};
}

double AlmostAnalyticExtension::chi(double mu) const {
  double a = std::abs(mu);
  double lo = 0.5 * mu_width;
  if (a <= lo) return 1.0;
  if (a >= mu_width) return 0.0;
  SmoothStep s;
  return 1.0 - s.value((a - lo) / (mu_width - lo));
}

double AlmostAnalyticExtension::chi_prime(double mu) const {
  double a = std::abs(mu);
  double lo = 0.5 * mu_width;
  if (a <= lo || a >= mu_width) return 0.0;
  SmoothStep s;
  double d = -s.deriv((a - lo) / (mu_width - lo), 1) / (mu_width - lo);
  return mu >= 0.0 ? d : -d;
}

Cplx AlmostAnalyticExtension::value(double lam, double mu) const {
  double c = chi(mu);
  if (c == 0.0) return 0.0;
  Cplx imu(0.0, mu), pw(1.0, 0.0);
  Cplx s = 0.0;
  double fact = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) {
      pw *= imu;
      fact *= k;
    }
    s += g.deriv(lam, k) * pw / fact;
  }
  return c * s;
}

Cplx AlmostAnalyticExtension::dbar(double lam, double mu) const {
  if (N < 0 || N > 3) throw std::runtime_error("AlmostAnalyticExtension: N must be in 0..3");
  Cplx imu(0.0, mu);
  double c = chi(mu);
  double cp = chi_prime(mu);
  Cplx out = 0.0;
  if (c != 0.0) {
    Cplx pw(1.0, 0.0);
    double fact = 1.0;
    for (int k = 0; k < N; ++k) {
      pw *= imu;
      fact *= (k + 1);
    }
    out += 0.5 * c * g.deriv(lam, N + 1) * pw / fact;
  }
  if (cp != 0.0) {
    Cplx pw(1.0, 0.0), s = 0.0;
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
      if (k > 0) {
        pw *= imu;
        fact *= k;
      }
      s += g.deriv(lam, k) * pw / fact;
    }
    out += Cplx(0.0, 0.5) * cp * s;
  }
  return out;
}

namespace {

bool numerically_real(const Eigen::MatrixXcd& M) {
  double scale = M.cwiseAbs().maxCoeff();
  double im = M.imag().cwiseAbs().maxCoeff();
  return im <= 1e-13 * std::max(scale, 1.0);
}

// 1D real stencil: banded storage solve (lower, column-major)
void solve_banded_1d(const Eigen::MatrixXd& A, int kd, bool want_vectors,
                     std::vector<double>& evals, Eigen::MatrixXd& vecs) {
  int n = (int)A.rows();
  std::vector<double> ab((size_t)(kd + 1) * n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = j; i <= std::min(n - 1, j + kd); ++i)
      ab[(size_t)j * (kd + 1) + (i - j)] = A(i, j);
  evals.assign(n, 0.0);
  std::vector<double> z(want_vectors ? (size_t)n * n : 1);
  int info = LAPACKE_dsbev(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n, kd, ab.data(),
                           kd + 1, evals.data(), z.data(), want_vectors ? n : 1);
  if (info != 0) throw std::runtime_error("dsbev failed, info=" + std::to_string(info));
  if (want_vectors) {
    vecs.resize(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) vecs(i, j) = z[(size_t)j * n + i];
  }
}

}  // namespace

SpectralData eigensolve(const MagneticOperatorMatrix& H, double E_cap, bool want_vectors) {
  long n = H.M.rows();
  double herm = (H.M - H.M.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10 * std::max(1.0, H.M.cwiseAbs().maxCoeff()))
    throw std::runtime_error("eigensolve: matrix is not Hermitian");

  SpectralData out;
  out.hbar = H.hbar;
  out.grid = H.grid;
  out.E_cap = E_cap;

  bool real = numerically_real(H.M);
  if (real && H.grid.d == 1) {
    Eigen::MatrixXd A = H.M.real();
    Eigen::MatrixXd V;
    solve_banded_1d(A, H.grid.stencil_order / 2, want_vectors, out.evals, V);
    if (want_vectors) out.vecs = V.cast<Cplx>();
  } else if (real) {
    Eigen::MatrixXd A = H.M.real();  // column-major, overwritten by dsyevd
    out.evals.assign(n, 0.0);
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', (int)n, A.data(),
                              (int)n, out.evals.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    if (want_vectors) out.vecs = A.cast<Cplx>();
  } else {
    Eigen::MatrixXcd A = H.M;
    out.evals.assign(n, 0.0);
    int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', (int)n,
                              reinterpret_cast<lapack_complex_double*>(A.data()), (int)n,
                              out.evals.data());
    if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
    if (want_vectors) out.vecs = A;
  }

  if (E_cap > 0.0)
    for (double e : out.evals)
      if (std::abs(e - E_cap) < 1e-6) out.cap_boundary_flag = true;
  return out;
}

std::vector<double> eigensolve_banded(const Eigen::MatrixXd& ab) {
  int n = (int)ab.cols();
  int kd = (int)ab.rows() - 1;
  std::vector<double> band(ab.data(), ab.data() + (size_t)(kd + 1) * n);
  std::vector<double> evals(n);
  double zdum;
  int info = LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'L', n, kd, band.data(), kd + 1, evals.data(),
                           &zdum, 1);
  if (info != 0) throw std::runtime_error("dsbev failed, info=" + std::to_string(info));
  return evals;
}

double trace_g(const SpectralData& s, const TestFunction& g) {
  if (s.E_cap > 0.0 && g.support_hi() > s.E_cap)
    throw std::runtime_error("trace_g: test function support exceeds E_cap");
  double t = 0.0;
  for (double e : s.evals) t += g(e);
  return t;
}

Eigen::MatrixXcd hs_apply(const MagneticOperatorMatrix& H, const AlmostAnalyticExtension& ext,
                          const HSQuadrature& quad, Execution exec) {
  long n = H.M.rows();
  double lo = ext.g.support_lo(), hi = ext.g.support_hi();
  if (quad.eps >= ext.mu_width)
    throw std::runtime_error("hs_apply: eps truncation removes the whole mu range");

  struct Node {
    double lam, mu;
    Cplx weight;  // quadrature weight times dbar
  };
  std::vector<Node> nodes;
  const GaussRule& rl = gauss_legendre(quad.n_lambda);
  const GaussRule& rm = gauss_legendre(quad.n_mu);
  // cosine-graded panel boundaries: the high derivatives of a compactly
  // supported bump concentrate near the support edges and a single
  // Gauss-Legendre rule cannot resolve them
  std::vector<double> bnd(quad.n_panels + 1);
  for (int k = 0; k <= quad.n_panels; ++k)
    bnd[k] = lo + (hi - lo) * 0.5 * (1.0 - std::cos(M_PI * k / quad.n_panels));
  for (int pan = 0; pan < quad.n_panels; ++pan) {
    double plo = bnd[pan], phi = bnd[pan + 1];
    for (int a = 0; a < quad.n_lambda; ++a) {
      double lam = 0.5 * (plo + phi) + 0.5 * (phi - plo) * rl.nodes[a];
      double wl = 0.5 * (phi - plo) * rl.weights[a];
      for (int sgn : {1, -1})
        for (int b = 0; b < quad.n_mu; ++b) {
          double mu = sgn * (0.5 * (quad.eps + ext.mu_width) +
                             0.5 * (ext.mu_width - quad.eps) * rm.nodes[b]);
          double wm = 0.5 * (ext.mu_width - quad.eps) * rm.weights[b];
          Cplx db = ext.dbar(lam, mu);
          if (db == Cplx(0.0, 0.0)) continue;
          nodes.push_back({lam, mu, wl * wm * db});
        }
    }
  }

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  auto contribution = [&](const Node& nd) {
    Eigen::MatrixXcd zI = Cplx(nd.lam, nd.mu) * Eigen::MatrixXcd::Identity(n, n) - H.M;
    return Eigen::MatrixXcd(nd.weight * zI.partialPivLu().inverse());
  };
  if (exec == Execution::parallel) {
#pragma omp parallel
    {
      Eigen::MatrixXcd local = Eigen::MatrixXcd::Zero(n, n);
#pragma omp for schedule(dynamic)
      for (long i = 0; i < (long)nodes.size(); ++i) local += contribution(nodes[i]);
#pragma omp critical
      acc += local;
    }
  } else {
    for (const Node& nd : nodes) acc += contribution(nd);
  }
  acc *= -1.0 / M_PI;
  return 0.5 * (acc + Eigen::MatrixXcd(acc.adjoint()));
}

Eigen::MatrixXcd hs_apply_extrapolated(const MagneticOperatorMatrix& H,
                                       const AlmostAnalyticExtension& ext, HSQuadrature quad,
                                       const std::vector<double>& eps_ladder, Execution exec) {
  if (eps_ladder.empty()) throw std::runtime_error("hs_apply_extrapolated: empty ladder");
  std::vector<Eigen::MatrixXcd> vals;
  for (double e : eps_ladder) {
    quad.eps = e;
    vals.push_back(hs_apply(H, ext, quad, exec));
  }
  // Richardson on the truncation error ~ eps^p, ladder assumed to halve eps
  int p = ext.N;
  while (vals.size() > 1) {
    std::vector<Eigen::MatrixXcd> next;
    double f = std::pow(2.0, p);
    for (size_t i = 0; i + 1 < vals.size(); ++i)
      next.push_back((f * vals[i + 1] - vals[i]) / (f - 1.0));
    vals = std::move(next);
    ++p;
  }
  return vals[0];
}

Eigen::MatrixXcd spectral_apply(const MagneticOperatorMatrix& H, const TestFunction& g) {
  SpectralData s = eigensolve(H, 0.0, true);
  long n = H.M.rows();
  Eigen::VectorXd gd(n);
  for (long i = 0; i < n; ++i) gd(i) = g(s.evals[i]);
  const Eigen::MatrixXcd& U = *s.vecs;
  return U * gd.asDiagonal() * U.adjoint();
}

}  // namespace magtrace
