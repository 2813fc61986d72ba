#include "magtrace/symbols.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace magtrace {

int PolySymbol::degree() const {
  int deg = 0;
  for (const auto& [a, c] : coeffs_) deg = std::max(deg, a.order());
  return deg;
}

void PolySymbol::add_term(const MultiIndex& xi_exp, const SmoothField& c) {
  auto it = coeffs_.find(xi_exp);
  if (it == coeffs_.end())
    coeffs_.emplace(xi_exp, c);
  else
    it->second = it->second + c;
}

static double xi_pow(const Vec& xi, const MultiIndex& a) {
  double p = 1.0;
  for (int j = 0; j < a.d; ++j)
    for (int i = 0; i < a.e[j]; ++i) p *= xi[j];
  return p;
}

double PolySymbol::evaluate(const Vec& x, const Vec& xi) const {
  double s = 0.0;
  for (const auto& [a, c] : coeffs_) s += c(x) * xi_pow(xi, a);
  return s;
}

PolySymbol PolySymbol::dx(const MultiIndex& a) const {
  PolySymbol out(d_);
  for (const auto& [e, c] : coeffs_) out.add_term(e, c.derivative(a));
  return out;
}

PolySymbol PolySymbol::dxi(const MultiIndex& b) const {
  PolySymbol out(d_);
  for (const auto& [e, c] : coeffs_) {
    bool ok = true;
    for (int j = 0; j < d_; ++j)
      if (e.e[j] < b.e[j]) ok = false;
    if (!ok) continue;
    double fac = 1.0;
    MultiIndex ne(d_);
    for (int j = 0; j < d_; ++j) {
      for (int i = 0; i < b.e[j]; ++i) fac *= (e.e[j] - i);
      ne.e[j] = e.e[j] - b.e[j];
    }
    out.add_term(ne, c.scaled(fac));
  }
  return out;
}

double PolySymbol::deriv(const Vec& x, const Vec& xi, const MultiIndex& ax,
                         const MultiIndex& bxi) const {
  return dxi(bxi).dx(ax).evaluate(x, xi);
}

PolySymbol PolySymbol::operator+(const PolySymbol& o) const {
  PolySymbol out = *this;
  for (const auto& [e, c] : o.coeffs_) out.add_term(e, c);
  return out;
}

PolySymbol PolySymbol::operator*(const PolySymbol& o) const {
  PolySymbol out(d_);
  for (const auto& [e1, c1] : coeffs_)
    for (const auto& [e2, c2] : o.coeffs_) out.add_term(e1 + e2, c1 * c2);
  return out;
}

PolySymbol PolySymbol::times_field(const SmoothField& c) const {
  PolySymbol out(d_);
  for (const auto& [e, f] : coeffs_) out.add_term(e, f * c);
  return out;
}

PolySymbol PolySymbol::scaled(double s) const {
  PolySymbol out(d_);
  for (const auto& [e, f] : coeffs_) out.add_term(e, f.scaled(s));
  return out;
}

PolySymbol PolySymbol::constant(int dim, double c) {
  PolySymbol p(dim);
  p.add_term(MultiIndex(dim), SmoothField::constant(dim, c));
  return p;
}

PolySymbol PolySymbol::xi_monomial(int dim, const MultiIndex& b, double c) {
  PolySymbol p(dim);
  p.add_term(b, SmoothField::constant(dim, c));
  return p;
}

PolySymbol hamiltonian_symbol(const ScalarPotential& V) {
  PolySymbol F(V.d);
  for (int j = 0; j < V.d; ++j) {
    MultiIndex sq(V.d);
    sq.e[j] = 2;
    F.add_term(sq, SmoothField::constant(V.d, 1.0));
  }
  F.add_term(MultiIndex(V.d), V.f);
  return F;
}

Cplx ResolventExpansion::pz(const Vec& x, const Vec& xi) const {
  double f = V(x);
  for (int j = 0; j < d; ++j) f += xi[j] * xi[j];
  return f - z;
}

Cplx ResolventExpansion::evaluate(const Vec& x, const Vec& xi) const {
  Cplx p = pz(x, xi);
  if (p == Cplx(0.0, 0.0)) throw std::runtime_error("ResolventExpansion: evaluation at a pole");
  Cplx pinv = 1.0 / p;
  Cplx s = 0.0;
  for (const auto& [k, q] : terms) {
    Cplx pw = pinv;
    for (int i = 0; i < k; ++i) pw *= pinv;
    s += q.evaluate(x, xi) * pw;
  }
  return s;
}

ResolventExpansion ResolventExpansion::operator+(const ResolventExpansion& o) const {
  ResolventExpansion out = *this;
  for (const auto& [k, q] : o.terms) {
    bool merged = false;
    for (auto& [k2, q2] : out.terms)
      if (k2 == k) {
        q2 = q2 + q;
        merged = true;
        break;
      }
    if (!merged) out.terms.emplace_back(k, q);
  }
  return out;
}

ResolventExpansion ResolventExpansion::scaled(double s) const {
  ResolventExpansion out = *this;
  for (auto& [k, q] : out.terms) q = q.scaled(s);
  return out;
}

ResolventExpansion ResolventExpansion::power_shift() const {
  ResolventExpansion out = *this;
  for (auto& [k, q] : out.terms) k += 1;
  return out;
}

ResolventExpansion pz_derivative(const ScalarPotential& V, const MultiIndex& a,
                                 const MultiIndex& b, Cplx z) {
  if (a.order() > 4 || b.order() > 4)
    throw std::runtime_error("pz_derivative: derivative order exceeds available V derivatives");
  int d = V.d;
  // q-vector indexed by the power k; start with p_z^{-1} itself
  std::vector<PolySymbol> q{PolySymbol::constant(d, 1.0)};
  auto x_step = [&](int j) {
    SmoothField Vj = V.f.derivative(MultiIndex::unit(d, j));
    std::vector<PolySymbol> nq(q.size() + 1, PolySymbol(d));
    for (size_t k = 0; k < q.size(); ++k) {
      nq[k] = nq[k] + q[k].dx(MultiIndex::unit(d, j));
      nq[k + 1] = nq[k + 1] + q[k].times_field(Vj).scaled(-(double)(k + 1));
    }
    q = std::move(nq);
  };
  auto xi_step = [&](int j) {
    std::vector<PolySymbol> nq(q.size() + 1, PolySymbol(d));
    PolySymbol xij = PolySymbol::xi_monomial(d, MultiIndex::unit(d, j));
    for (size_t k = 0; k < q.size(); ++k) {
      nq[k] = nq[k] + q[k].dxi(MultiIndex::unit(d, j));
      nq[k + 1] = nq[k + 1] + (xij * q[k]).scaled(-2.0 * (k + 1));
    }
    q = std::move(nq);
  };
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < b.e[j]; ++i) xi_step(j);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < a.e[j]; ++i) x_step(j);

  ResolventExpansion out;
  out.d = d;
  out.z = z;
  out.V = V;
  for (size_t k = 0; k < q.size(); ++k)
    if (!q[k].empty()) out.terms.emplace_back((int)k, q[k]);
  return out;
}

double GaussianSymbol::evaluate(const Vec& x, const Vec& xi) const {
  return deriv(x, xi, MultiIndex(d), MultiIndex(d));
}

double GaussianSymbol::deriv(const Vec& x, const Vec& xi, const MultiIndex& ax,
                             const MultiIndex& bxi) const {
  double g = 1.0;
  auto g1 = gaussian1d(std::sqrt(2.0) * w);  // exp(-t^2/(2 w^2))
  for (int j = 0; j < d; ++j) g *= g1(xi[j] - xi0[j], bxi.e[j]);
  return amp.deriv(x, ax) * g;
}

Cplx GaussianSymbol::fourier_kernel(const Vec& x, const Vec& v, double hbar) const {
  double v2 = 0.0, ph = 0.0;
  for (int j = 0; j < d; ++j) {
    v2 += v[j] * v[j];
    ph += xi0[j] * v[j];
  }
  double norm = std::pow(std::sqrt(2.0 * M_PI) * w / (2.0 * M_PI * hbar), d);
  return norm * std::exp(Cplx(0.0, ph / hbar)) *
         std::exp(-w * w * v2 / (2.0 * hbar * hbar)) * amp(x);
}

SymbolFn as_symbol(const PolySymbol& p) {
  return SymbolFn{p.dim(),
                  [p](const Vec& x, const Vec& xi, const MultiIndex& a, const MultiIndex& b) {
                    return Cplx(p.deriv(x, xi, a, b), 0.0);
                  }};
}

SymbolFn as_symbol(const GaussianSymbol& g) {
  return SymbolFn{g.d, [g](const Vec& x, const Vec& xi, const MultiIndex& a, const MultiIndex& b) {
                    return Cplx(g.deriv(x, xi, a, b), 0.0);
                  }};
}

SymbolFn pz_symbol(const ScalarPotential& V, Cplx z) {
  PolySymbol F = hamiltonian_symbol(V);
  return SymbolFn{V.d,
                  [F, z](const Vec& x, const Vec& xi, const MultiIndex& a, const MultiIndex& b) {
                    Cplx v(F.deriv(x, xi, a, b), 0.0);
                    if (a.order() == 0 && b.order() == 0) v -= z;
                    return v;
                  }};
}

SymbolFn pz_inverse_symbol(const ScalarPotential& V, Cplx z, int max_order) {
  auto cache = std::make_shared<std::map<std::pair<MultiIndex, MultiIndex>, ResolventExpansion>>();
  for (const MultiIndex& a : multi_indices_below(
           V.d == 1 ? MultiIndex(1, {max_order}) : MultiIndex(2, {max_order, max_order})))
    for (const MultiIndex& b : multi_indices_below(
             V.d == 1 ? MultiIndex(1, {max_order}) : MultiIndex(2, {max_order, max_order})))
      cache->emplace(std::make_pair(a, b), pz_derivative(V, a, b, z));
  return SymbolFn{V.d,
                  [cache](const Vec& x, const Vec& xi, const MultiIndex& a, const MultiIndex& b) {
                    auto it = cache->find(std::make_pair(a, b));
                    if (it == cache->end())
                      throw std::runtime_error("pz_inverse_symbol: derivative not precomputed");
                    return it->second.evaluate(x, xi);
                  }};
}

}  // namespace magtrace
