#include "magtrace/quantize.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <stdexcept>

#include "magtrace/quadrature.hpp"

namespace magtrace {

void GridSpec::validate() const {
  if (d < 1 || d > 2) throw std::runtime_error("GridSpec: d must be 1 or 2");
  if (N < 4) throw std::runtime_error("GridSpec: N too small");
  if (L <= 0.0) throw std::runtime_error("GridSpec: L must be positive");
  if (stencil_order != 2 && stencil_order != 4)
    throw std::runtime_error("GridSpec: stencil order must be 2 or 4");
  if (size() > memory_cap_rows)
    throw std::runtime_error("GridSpec: matrix dimension " + std::to_string(size()) +
                             " exceeds memory cap " + std::to_string(memory_cap_rows));
}

Vec GridSpec::point(long idx) const {
  Vec x{0.0, 0.0};
  double h = hx();
  if (d == 1) {
    x[0] = -L + h * idx;
  } else {
    x[0] = -L + h * (idx / N);
    x[1] = -L + h * (idx % N);
  }
  return x;
}

namespace {

inline Cplx peierls(const VectorPotential& A, double hbar, const Vec& x, const Vec& y) {
  double li = line_integral(A, x, y);
  if (li == 0.0) return Cplx(1.0, 0.0);
  return std::exp(Cplx(0.0, -li / hbar));
}

}  // namespace

bool is_zero_gauge(const VectorPotential& A) {
  for (const auto& c : A.comp)
    if (c.valid()) return false;
  return true;
}

MagneticOperatorMatrix build_hamiltonian(const ScalarPotential& V, const VectorPotential& A,
                                         double hbar, const GridSpec& grid, double E_cap,
                                         Execution exec) {
  grid.validate();
  if (V.d != grid.d) throw std::runtime_error("build_hamiltonian: dimension mismatch");
  long n = grid.size();
  double h = grid.hx();
  double t = hbar * hbar / (h * h);
  bool zero_gauge = is_zero_gauge(A);

  MagneticOperatorMatrix out;
  out.grid = grid;
  out.hbar = hbar;
  out.M = Eigen::MatrixXcd::Zero(n, n);

  // resolution check: the lattice must resolve the de Broglie scale of the
  // fastest state kept below E_cap
  if (E_cap > 0.0) {
    double pmax = std::sqrt(std::max(E_cap + V.lower_bound, 1e-12));
    if (h > 0.5 * hbar / pmax) {
      out.resolution_warning = true;
      std::cerr << "warning: grid spacing " << h << " exceeds hbar/(2 p_max) = "
                << 0.5 * hbar / pmax << "; eigenvalues below E_cap may be under-resolved\n";
    }
  }

  const bool o4 = grid.stencil_order == 4;
  const double diag_c = o4 ? 2.5 : 2.0;
  const double hop1_c = o4 ? 4.0 / 3.0 : 1.0;
  const double hop2_c = 1.0 / 12.0;  // sign flipped by the -hbar^2 prefactor

  auto row = [&](long i) {
    Vec x = grid.point(i);
    out.M(i, i) = grid.d * diag_c * t + V(x);
    for (int dir = 0; dir < grid.d; ++dir) {
      long stride = (grid.d == 2 && dir == 0) ? grid.N : 1;
      int coord = (grid.d == 2) ? (dir == 0 ? (int)(i / grid.N) : (int)(i % grid.N)) : (int)i;
      for (int step : {-2, -1, 1, 2}) {
        if (!o4 && std::abs(step) == 2) continue;
        int c2 = coord + step;
        if (c2 < 0 || c2 >= grid.N) continue;  // Dirichlet: outside values vanish
        long jdx = i + step * stride;
        Vec y = grid.point(jdx);
        double w = (std::abs(step) == 1) ? -hop1_c : hop2_c;
        Cplx ph = zero_gauge ? Cplx(1.0, 0.0) : peierls(A, hbar, x, y);
        out.M(i, jdx) = w * t * ph;
      }
    }
  };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) row(i);
  } else {
    for (long i = 0; i < n; ++i) row(i);
  }
  return out;
}

MagneticOperatorMatrix build_op_kernel(const GaussianSymbol& phi, const VectorPotential& A,
                                       double hbar, const GridSpec& grid, Execution exec) {
  grid.validate();
  if (phi.d != grid.d) throw std::runtime_error("build_op_kernel: dimension mismatch");
  long n = grid.size();
  double h = grid.hx();
  double cell = std::pow(h, grid.d);
  bool zero_gauge = is_zero_gauge(A);

  MagneticOperatorMatrix out;
  out.grid = grid;
  out.hbar = hbar;
  out.M = Eigen::MatrixXcd::Zero(n, n);

  auto row = [&](long i) {
    Vec x = grid.point(i);
    for (long j = 0; j < n; ++j) {
      Vec y = grid.point(j);
      Vec mid{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])};
      Vec v{x[0] - y[0], x[1] - y[1]};
      Cplx k = phi.fourier_kernel(mid, v, hbar);
      if (!zero_gauge) k *= peierls(A, hbar, x, y);
      out.M(i, j) = cell * k;
    }
  };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) row(i);
  } else {
    for (long i = 0; i < n; ++i) row(i);
  }
  // the continuum kernel is Hermitian; the discretization preserves this up to
  // roundoff, symmetrize to make it exact
  out.M = 0.5 * (out.M + Eigen::MatrixXcd(out.M.adjoint()));
  return out;
}

SymbolGrid sample_symbol_grid(const std::function<Cplx(const Vec&, const Vec&)>& sigma, int d,
                              const GridSpec& grid, double xi_lo, double xi_hi, int n_xi,
                              Execution exec) {
  grid.validate();
  if (d != grid.d) throw std::runtime_error("sample_symbol_grid: dimension mismatch");
  SymbolGrid sg;
  sg.d = d;
  sg.grid = grid;
  sg.xi_lo = xi_lo;
  sg.xi_hi = xi_hi;
  sg.n_xi = n_xi;

  int N = grid.N;
  double h = grid.hx();
  const GaussRule& r = gauss_legendre(n_xi);
  std::vector<double> xn(n_xi);
  for (int a = 0; a < n_xi; ++a) xn[a] = 0.5 * (xi_lo + xi_hi) + 0.5 * (xi_hi - xi_lo) * r.nodes[a];

  int M = 2 * N - 1;
  long nmid = (d == 1) ? M : (long)M * M;
  long nxit = (d == 1) ? n_xi : (long)n_xi * n_xi;
  sg.values.resize(nmid * nxit);
  auto fill = [&](long mi) {
    Vec m{0.0, 0.0};
    if (d == 1) {
      m[0] = -grid.L + 0.5 * h * mi;
    } else {
      m[0] = -grid.L + 0.5 * h * (mi / M);
      m[1] = -grid.L + 0.5 * h * (mi % M);
    }
    for (long q = 0; q < nxit; ++q) {
      Vec xi{0.0, 0.0};
      if (d == 1)
        xi[0] = xn[q];
      else {
        xi[0] = xn[q / n_xi];
        xi[1] = xn[q % n_xi];
      }
      Cplx v = sigma(m, xi);
      sg.values[mi * nxit + q] = std::complex<float>((float)v.real(), (float)v.imag());
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long mi = 0; mi < nmid; ++mi) fill(mi);
  } else {
    for (long mi = 0; mi < nmid; ++mi) fill(mi);
  }
  return sg;
}

MagneticOperatorMatrix quantize_symbol_grids(const std::vector<const SymbolGrid*>& grids,
                                             const std::vector<Cplx>& weights,
                                             const VectorPotential& A, double hbar, double v_cut,
                                             Execution exec) {
  if (grids.empty() || grids.size() != weights.size())
    throw std::runtime_error("quantize_symbol_grids: grids/weights mismatch");
  const SymbolGrid& g0 = *grids[0];
  for (const SymbolGrid* g : grids)
    if (g->n_xi != g0.n_xi || g->grid.N != g0.grid.N || g->d != g0.d ||
        g->xi_lo != g0.xi_lo || g->xi_hi != g0.xi_hi)
      throw std::runtime_error("quantize_symbol_grids: incompatible sample grids");

  int d = g0.d, N = g0.grid.N, n_xi = g0.n_xi;
  const GridSpec& grid = g0.grid;
  long n = grid.size();
  double h = grid.hx();
  bool zero_gauge = is_zero_gauge(A);
  int M = 2 * N - 1;
  long nxit = (d == 1) ? n_xi : (long)n_xi * n_xi;

  // combine the weighted samples once per call (double precision accumulator)
  long total = (long)g0.values.size();
  std::vector<Cplx> sg(total);
  {
    const size_t ng = grids.size();
    for (long t = 0; t < total; ++t) {
      Cplx v = 0.0;
      for (size_t k = 0; k < ng; ++k) {
        const std::complex<float>& f = grids[k]->values[t];
        v += weights[k] * Cplx(f.real(), f.imag());
      }
      sg[t] = v;
    }
  }

  const GaussRule& r = gauss_legendre(n_xi);
  std::vector<double> xn(n_xi), xw(n_xi);
  for (int a = 0; a < n_xi; ++a) {
    xn[a] = 0.5 * (g0.xi_lo + g0.xi_hi) + 0.5 * (g0.xi_hi - g0.xi_lo) * r.nodes[a];
    xw[a] = 0.5 * (g0.xi_hi - g0.xi_lo) * r.weights[a];
  }
  // phase table: pt[dv + N - 1][a] = w_a exp(i xi_a dv h / hbar)
  std::vector<std::vector<Cplx>> pt(2 * N - 1, std::vector<Cplx>(n_xi));
  for (int dv = -(N - 1); dv <= N - 1; ++dv)
    for (int a = 0; a < n_xi; ++a)
      pt[dv + N - 1][a] = xw[a] * std::exp(Cplx(0.0, xn[a] * dv * h / hbar));

  MagneticOperatorMatrix out;
  out.grid = grid;
  out.hbar = hbar;
  out.M = Eigen::MatrixXcd::Zero(n, n);
  double pref = std::pow(h / (2.0 * M_PI * hbar), d);  // cell measure x (2 pi hbar)^{-d}
  int dv_cut = (int)std::floor(v_cut / h);

  auto row = [&](long i) {
    int i0 = (d == 2) ? (int)(i / N) : (int)i;
    int i1 = (d == 2) ? (int)(i % N) : 0;
    Vec x = grid.point(i);
    for (long j = 0; j < n; ++j) {
      int j0 = (d == 2) ? (int)(j / N) : (int)j;
      int j1 = (d == 2) ? (int)(j % N) : 0;
      int dv0 = i0 - j0, dv1 = i1 - j1;
      if (std::abs(dv0) > dv_cut || std::abs(dv1) > dv_cut) continue;
      long mid = (d == 1) ? (long)(i0 + j0) : (long)(i0 + j0) * M + (i1 + j1);
      const Cplx* s = &sg[mid * nxit];
      Cplx acc = 0.0;
      if (d == 1) {
        const Cplx* p0 = pt[dv0 + N - 1].data();
        for (int a = 0; a < n_xi; ++a) acc += s[a] * p0[a];
      } else {
        const Cplx* p0 = pt[dv0 + N - 1].data();
        const Cplx* p1 = pt[dv1 + N - 1].data();
        for (int a = 0; a < n_xi; ++a) {
          Cplx inner = 0.0;
          const Cplx* sa = s + (long)a * n_xi;
          for (int b = 0; b < n_xi; ++b) inner += sa[b] * p1[b];
          acc += inner * p0[a];
        }
      }
      if (!zero_gauge) acc *= peierls(A, hbar, x, grid.point(j));
      out.M(i, j) = pref * acc;
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) row(i);
  } else {
    for (long i = 0; i < n; ++i) row(i);
  }
  return out;
}

MagneticOperatorMatrix build_op_kernel_numeric(const std::function<Cplx(const Vec&, const Vec&)>& sigma,
                                               int d, const VectorPotential& A, double hbar,
                                               const GridSpec& grid, double xi_lo, double xi_hi,
                                               int n_xi, double v_cut, Execution exec) {
  SymbolGrid sg = sample_symbol_grid(sigma, d, grid, xi_lo, xi_hi, n_xi, exec);
  return quantize_symbol_grids({&sg}, {Cplx(1.0, 0.0)}, A, hbar, v_cut, exec);
}

Cplx weyl_symbol_at(const MagneticOperatorMatrix& M, const VectorPotential& A, long mid_idx,
                    const Vec& xi) {
  const GridSpec& g = M.grid;
  int N = g.N, d = g.d;
  double h = g.hx();
  bool zero_gauge = is_zero_gauge(A);
  int c0 = (d == 2) ? (int)(mid_idx / N) : (int)mid_idx;
  int c1 = (d == 2) ? (int)(mid_idx % N) : 0;
  int t0max = std::min(c0, N - 1 - c0);
  int t1max = (d == 2) ? std::min(c1, N - 1 - c1) : 0;
  Cplx acc = 0.0;
  for (int t0 = -t0max; t0 <= t0max; ++t0)
    for (int t1 = -t1max; t1 <= t1max; ++t1) {
      long i = (d == 2) ? (long)(c0 + t0) * N + (c1 + t1) : (long)(c0 + t0);
      long j = (d == 2) ? (long)(c0 - t0) * N + (c1 - t1) : (long)(c0 - t0);
      Cplx k = M.M(i, j);
      if (k == Cplx(0.0, 0.0)) continue;
      double phase = -(xi[0] * 2.0 * h * t0 + xi[1] * 2.0 * h * t1) / M.hbar;
      Cplx term = k * std::exp(Cplx(0.0, phase));
      if (!zero_gauge) term /= peierls(A, M.hbar, g.point(i), g.point(j));
      acc += term;
    }
  // matrix entries carry the cell measure h^d; v-lattice measure is (2h)^d
  return acc * std::pow(2.0, d);
}

Eigen::MatrixXd build_hamiltonian_banded(const ScalarPotential& V, double hbar,
                                         const GridSpec& grid) {
  if (grid.d != 1) throw std::runtime_error("build_hamiltonian_banded: 1D only");
  int n = grid.N;
  double h = grid.hx();
  double t = hbar * hbar / (h * h);
  const bool o4 = grid.stencil_order == 4;
  int kd = o4 ? 2 : 1;
  Eigen::MatrixXd ab = Eigen::MatrixXd::Zero(kd + 1, n);
  for (int j = 0; j < n; ++j) {
    ab(0, j) = (o4 ? 2.5 : 2.0) * t + V(Vec{-grid.L + h * j, 0.0});
    if (j + 1 < n) ab(1, j) = -(o4 ? 4.0 / 3.0 : 1.0) * t;
    if (o4 && j + 2 < n) ab(2, j) = 1.0 / 12.0 * t;
  }
  return ab;
}

MagneticOperatorMatrix gauge_conjugate(const MagneticOperatorMatrix& M, const GaugeFunction& phi) {
  long n = M.M.rows();
  Eigen::VectorXcd D(n);
  for (long i = 0; i < n; ++i)
    D(i) = std::exp(Cplx(0.0, phi(M.grid.point(i)) / M.hbar));
  MagneticOperatorMatrix out = M;
  out.M = D.asDiagonal() * M.M * D.conjugate().asDiagonal();
  return out;
}

void dump_matrix(const MagneticOperatorMatrix& M, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("dump_matrix: cannot open " + path);
  char header[32] = {0};
  std::memcpy(header, "MGTR", 4);
  int32_t d = M.grid.d, N = M.grid.N;
  std::memcpy(header + 4, &d, 4);
  std::memcpy(header + 8, &N, 4);
  std::memcpy(header + 12, &M.hbar, 8);
  double L = M.grid.L;
  std::memcpy(header + 20, &L, 8);
  std::fwrite(header, 1, 32, f);
  long n = M.M.rows();
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Cplx v = M.M(i, j);
      double re = v.real(), im = v.imag();
      std::fwrite(&re, 8, 1, f);
      std::fwrite(&im, 8, 1, f);
    }
  std::fclose(f);
}

MagneticOperatorMatrix load_matrix(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_matrix: cannot open " + path);
  char header[32];
  if (std::fread(header, 1, 32, f) != 32 || std::memcmp(header, "MGTR", 4) != 0) {
    std::fclose(f);
    throw std::runtime_error("load_matrix: bad header in " + path);
  }
  MagneticOperatorMatrix out;
  int32_t d, N;
  std::memcpy(&d, header + 4, 4);
  std::memcpy(&N, header + 8, 4);
  std::memcpy(&out.hbar, header + 12, 8);
  std::memcpy(&out.grid.L, header + 20, 8);
  out.grid.d = d;
  out.grid.N = N;
  long n = out.grid.size();
  out.M.resize(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double re, im;
      if (std::fread(&re, 8, 1, f) != 1 || std::fread(&im, 8, 1, f) != 1) {
        std::fclose(f);
        throw std::runtime_error("load_matrix: truncated file " + path);
      }
      out.M(i, j) = Cplx(re, im);
    }
  std::fclose(f);
  return out;
}

}  // namespace magtrace
