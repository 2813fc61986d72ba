#pragma once

#include <Eigen/Dense>
#include <string>

#include "magtrace/exec.hpp"
#include "magtrace/fields.hpp"
#include "magtrace/symbols.hpp"

namespace magtrace {

struct GridSpec {
  int d = 1;
  double L = 5.0;     // box [-L, L]^d
  int N = 64;         // points per dimension
  int stencil_order = 4;

  double hx() const { return 2.0 * L / (N - 1); }
  long size() const { long s = 1; for (int j = 0; j < d; ++j) s *= N; return s; }
  Vec point(long idx) const;
  long memory_cap_rows = 14000;

  void validate() const;
};

struct MagneticOperatorMatrix {
  Eigen::MatrixXcd M;
  GridSpec grid;
  double hbar = 1.0;
  bool resolution_warning = false;
};

// Peierls-substitution finite-difference magnetic Schroedinger matrix on the
// Dirichlet box.  Link phases exp(-(i/hbar) int_[x,y] A) keep gauge covariance
// exact at the lattice level.
MagneticOperatorMatrix build_hamiltonian(const ScalarPotential& V, const VectorPotential& A,
                                         double hbar, const GridSpec& grid,
                                         double E_cap = 0.0,
                                         Execution exec = Execution::parallel);

// Magnetic Weyl kernel quantization of a Gaussian symbol:
// M_xy = hx^d exp(-(i/hbar) int_[x,y] A) F^-[phi]((x+y)/2, x-y)
MagneticOperatorMatrix build_op_kernel(const GaussianSymbol& phi, const VectorPotential& A,
                                       double hbar, const GridSpec& grid,
                                       Execution exec = Execution::parallel);

// Generic symbol quantization in two stages so expensive symbol samples can be
// reused across an hbar ladder: samples live on the midpoint lattice (spacing
// h/2) tensored with a Gauss-Legendre xi grid on [xi_lo, xi_hi]^d.
struct SymbolGrid {
  int d = 1;
  GridSpec grid;
  double xi_lo = -5.0, xi_hi = 5.0;
  int n_xi = 32;
  std::vector<std::complex<float>> values;  // [midpoint][xi tensor]
};

SymbolGrid sample_symbol_grid(const std::function<Cplx(const Vec&, const Vec&)>& sigma, int d,
                              const GridSpec& grid, double xi_lo, double xi_hi, int n_xi,
                              Execution exec = Execution::parallel);

// quantize a weighted combination sum_k w_k sigma_k; entries with
// |x - y|_inf > v_cut are dropped (rapidly decaying kernels only)
MagneticOperatorMatrix quantize_symbol_grids(const std::vector<const SymbolGrid*>& grids,
                                             const std::vector<Cplx>& weights,
                                             const VectorPotential& A, double hbar, double v_cut,
                                             Execution exec = Execution::parallel);

MagneticOperatorMatrix build_op_kernel_numeric(
    const std::function<Cplx(const Vec&, const Vec&)>& sigma, int d, const VectorPotential& A,
    double hbar, const GridSpec& grid, double xi_lo, double xi_hi, int n_xi, double v_cut,
    Execution exec = Execution::parallel);

// de-quantization: recover the magnetic Weyl symbol of a kernel matrix at one
// phase-space point by the inverse Fourier sum over the difference lattice
Cplx weyl_symbol_at(const MagneticOperatorMatrix& M, const VectorPotential& A, long mid_idx,
                    const Vec& xi);

MagneticOperatorMatrix gauge_conjugate(const MagneticOperatorMatrix& M, const GaugeFunction& phi);

bool is_zero_gauge(const VectorPotential& A);

// band-storage (lower, col-major, ldab = order/2 + 1) fast path for large 1D
// zero-gauge grids; avoids the dense matrix entirely
Eigen::MatrixXd build_hamiltonian_banded(const ScalarPotential& V, double hbar,
                                         const GridSpec& grid);

// debugging dump: 32-byte header (magic 'MGTR', d, N, hbar) + row-major
// little-endian complex pairs
void dump_matrix(const MagneticOperatorMatrix& M, const std::string& path);
MagneticOperatorMatrix load_matrix(const std::string& path);

}  // namespace magtrace
