#pragma once

#include <complex>
#include <map>
#include <vector>

#include "magtrace/fields.hpp"
#include "magtrace/smoothfield.hpp"

namespace magtrace {

using Cplx = std::complex<double>;

// Finite sum of coefficient fields times xi-monomials: sum_a c_a(x) xi^a.
// xi-differentiation is exact; x-differentiation is delegated to the fields.
class PolySymbol {
 public:
  PolySymbol() = default;
  explicit PolySymbol(int dim) : d_(dim) {}

  int dim() const { return d_; }
  int degree() const;
  bool empty() const { return coeffs_.empty(); }
  const std::map<MultiIndex, SmoothField>& coeffs() const { return coeffs_; }

  void add_term(const MultiIndex& xi_exp, const SmoothField& c);

  double evaluate(const Vec& x, const Vec& xi) const;
  // derivative in x (coefficient-wise) and in xi (exact monomial calculus)
  PolySymbol dx(const MultiIndex& a) const;
  PolySymbol dxi(const MultiIndex& b) const;
  double deriv(const Vec& x, const Vec& xi, const MultiIndex& ax, const MultiIndex& bxi) const;

  PolySymbol operator+(const PolySymbol& o) const;
  PolySymbol operator*(const PolySymbol& o) const;
  PolySymbol times_field(const SmoothField& c) const;
  PolySymbol scaled(double s) const;

  static PolySymbol constant(int dim, double c);
  static PolySymbol xi_monomial(int dim, const MultiIndex& b, double c = 1.0);

 private:
  int d_ = 1;
  std::map<MultiIndex, SmoothField> coeffs_;
};

// F(x, xi) = |xi|^2 + V(x)
PolySymbol hamiltonian_symbol(const ScalarPotential& V);

// sum_k q_k(x, xi) p_z^{-1-k} with p_z = xi^2 + V - z
struct ResolventExpansion {
  int d = 1;
  Cplx z;
  ScalarPotential V;
  std::vector<std::pair<int, PolySymbol>> terms;

  Cplx pz(const Vec& x, const Vec& xi) const;
  Cplx evaluate(const Vec& x, const Vec& xi) const;

  ResolventExpansion operator+(const ResolventExpansion& o) const;
  ResolventExpansion scaled(double s) const;
  // multiply by p_z^{-1}: shift every power index up by one
  ResolventExpansion power_shift() const;
};

// expansion of d^a_x d^b_xi p_z^{-1}, built by the induction on |a|+|b|
ResolventExpansion pz_derivative(const ScalarPotential& V, const MultiIndex& a,
                                 const MultiIndex& b, Cplx z);

// a(x) exp(-|xi - xi0|^2 / (2 w^2))
struct GaussianSymbol {
  int d = 1;
  SmoothField amp;
  Vec xi0{0.0, 0.0};
  double w = 1.0;

  double evaluate(const Vec& x, const Vec& xi) const;
  double deriv(const Vec& x, const Vec& xi, const MultiIndex& ax, const MultiIndex& bxi) const;
  // closed-form inverse Fourier transform in xi at scale hbar:
  // (2 pi hbar)^{-d} (sqrt(2 pi) w)^d exp(i xi0.v/hbar) exp(-w^2 |v|^2/(2 hbar^2)) a(x)
  Cplx fourier_kernel(const Vec& x, const Vec& v, double hbar) const;
};

// Type-erased phase-space symbol with derivatives: the common currency of the
// Moyal coefficient routines.
struct SymbolFn {
  int d = 1;
  std::function<Cplx(const Vec&, const Vec&, const MultiIndex&, const MultiIndex&)> eval;

  Cplx operator()(const Vec& x, const Vec& xi) const {
    return eval(x, xi, MultiIndex(d), MultiIndex(d));
  }
  Cplx deriv(const Vec& x, const Vec& xi, const MultiIndex& ax, const MultiIndex& bxi) const {
    return eval(x, xi, ax, bxi);
  }
};

SymbolFn as_symbol(const PolySymbol& p);
SymbolFn as_symbol(const GaussianSymbol& g);
// p_z = xi^2 + V - z and its inverse (derivatives up to max_order precomputed)
SymbolFn pz_symbol(const ScalarPotential& V, Cplx z);
SymbolFn pz_inverse_symbol(const ScalarPotential& V, Cplx z, int max_order = 2);

}  // namespace magtrace
