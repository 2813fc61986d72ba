#include "magtrace/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "magtrace/profiles.hpp"
#include "magtrace/quadrature.hpp"

namespace magtrace {

double ScalarPotential::laplacian(const Vec& x) const {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    MultiIndex a(d);
    a.e[j] = 2;
    s += f.deriv(x, a);
  }
  return s;
}

double ScalarPotential::grad_sq(const Vec& x) const {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    double g = f.deriv(x, MultiIndex::unit(d, j));
    s += g * g;
  }
  return s;
}

double MagneticField::component(int j, int k, const Vec& x) const {
  if (j == k || is_zero()) return 0.0;
  double v = b12(x);
  return (j < k) ? v : -v;
}

double MagneticField::component_deriv(int j, int k, const Vec& x, const MultiIndex& a) const {
  if (j == k || is_zero()) return 0.0;
  double v = b12.deriv(x, a);
  return (j < k) ? v : -v;
}

MagneticField curl(const VectorPotential& A) {
  MagneticField B;
  B.d = A.d;
  if (A.d == 2) {
    SmoothField d1A2 = A.comp[1].derivative(MultiIndex::unit(2, 0));
    SmoothField d2A1 = A.comp[0].derivative(MultiIndex::unit(2, 1));
    B.b12 = d1A2 - d2A1;
  }
  return B;
}

VectorPotential gauge_shift(const VectorPotential& A, const GaugeFunction& phi) {
  if (A.d != phi.d) throw std::invalid_argument("gauge_shift: dimension mismatch");
  VectorPotential out;
  out.d = A.d;
  for (int j = 0; j < A.d; ++j)
    out.comp.push_back(A.comp[j] + phi.phi.derivative(MultiIndex::unit(A.d, j)));
  return out;
}

double line_integral(const VectorPotential& A, const Vec& x, const Vec& y, int order) {
  const GaussRule& r = gauss_legendre(order);
  double s = 0.0;
  for (int i = 0; i < order; ++i) {
    double t = 0.5 * (1.0 + r.nodes[i]);
    Vec p{x[0] + t * (y[0] - x[0]), x[1] + t * (y[1] - x[1])};
    double v = 0.0;
    for (int j = 0; j < A.d; ++j) v += A.comp[j](p) * (y[j] - x[j]);
    s += 0.5 * r.weights[i] * v;
  }
  return s;
}

double triangle_flux(const MagneticField& B, const Vec& x, const Vec& y, const Vec& z, int order) {
  if (B.d != 2) return 0.0;
  // 4 sum_{jk} y_j z_k int_0^1 ds int_0^{1-s} dt B_jk(x + (2s-1)y + (2t-1)z)
  // Only (j,k) in {(1,2),(2,1)} contribute:
  //   y_1 z_2 B_12 + y_2 z_1 B_21 = (y_1 z_2 - y_2 z_1) B_12.
  double cross = y[0] * z[1] - y[1] * z[0];
  if (cross == 0.0 || B.is_zero()) return 0.0;
  const GaussRule& r = gauss_legendre(order);
  double s = 0.0;
  for (int i = 0; i < order; ++i) {
    double si = 0.5 * (1.0 + r.nodes[i]);
    double rem = 1.0 - si;
    double inner = 0.0;
    for (int k = 0; k < order; ++k) {
      double ti = rem * 0.5 * (1.0 + r.nodes[k]);
      Vec p{x[0] + (2 * si - 1) * y[0] + (2 * ti - 1) * z[0],
            x[1] + (2 * si - 1) * y[1] + (2 * ti - 1) * z[1]};
      inner += 0.5 * r.weights[k] * B.b12(p);
    }
    s += 0.5 * r.weights[i] * rem * inner;
  }
  return 4.0 * cross * s;
}

double norm_sq(const MagneticField& B, const Vec& x) {
  if (B.is_zero()) return 0.0;
  double v = B.b12(x);
  return v * v;
}

SmoothField compose(const std::function<double(double, int)>& outer, const SmoothField& inner,
                    int order) {
  return SmoothField(
      inner.dim(), order,
      [outer, inner, order](const Vec& x, const MultiIndex& a) -> double {
        if (a.order() == 0) return outer(inner(x), 0);
        int j = (a.e[0] > 0) ? 0 : 1;
        MultiIndex rest = a - MultiIndex::unit(a.d, j);
        auto shifted = [outer](double t, int k) { return outer(t, k + 1); };
        SmoothField g =
            compose(shifted, inner, order - 1) * inner.derivative(MultiIndex::unit(inner.dim(), j));
        return g.deriv(x, rest);
      });
}

ScalarPotential cutoff_modify(const ScalarPotential& V, double E, double sigma_ceiling) {
  double sigma = std::isinf(V.sigma_inf) ? sigma_ceiling : V.sigma_inf;
  if (E >= sigma) throw std::invalid_argument("cutoff_modify: E must be below Sigma_V");
  double a = 0.5 * (E + sigma);
  double b = (E + 2.0 * sigma) / 3.0;
  double width = b - a;  // positive since E < sigma
  SmoothStep S;
  auto chi = [a, width, S](double t, int k) -> double {
    double u = (t - a) / width;
    switch (k) {
      case 0: return t - width * S.antideriv(u);
      case 1: return 1.0 - S.value(u);
      default: return -S.deriv(u, k - 1) / std::pow(width, k - 1);
    }
  };
  ScalarPotential out;
  out.d = V.d;
  out.f = compose(chi, V.f, 4);
  out.sigma_inf = a + 0.5 * width;  // the plateau value
  out.lower_bound = V.lower_bound;
  return out;
}

// --- builtin families -------------------------------------------------------

SmoothField separable_field(int dim, std::vector<std::function<double(double, int)>> fs,
                            int order) {
  return SmoothField(dim, order, [dim, fs](const Vec& x, const MultiIndex& a) {
    double p = 1.0;
    for (int j = 0; j < dim; ++j) p *= fs[j](x[j], a.e[j]);
    return p;
  });
}

std::function<double(double, int)> monomial1d(double coef, int power) {
  return [coef, power](double t, int k) -> double {
    if (k > power) return 0.0;
    double c = coef;
    for (int i = 0; i < k; ++i) c *= (power - i);
    return c * std::pow(t, power - k);
  };
}

std::function<double(double, int)> gaussian1d(double w) {
  // d^k/dt^k exp(-t^2/w^2) = (-1/w)^k H_k(t/w) exp(-t^2/w^2)
  return [w](double t, int k) -> double {
    double s = t / w;
    double g = std::exp(-s * s);
    double h0 = 1.0, h1 = 2.0 * s;
    double h = (k == 0) ? h0 : h1;
    for (int n = 1; n < k; ++n) {
      double h2 = 2.0 * s * h1 - 2.0 * n * h0;
      h0 = h1;
      h1 = h2;
      h = h2;
    }
    return std::pow(-1.0 / w, k) * h * g;
  };
}

static std::function<double(double, int)> one1d() {
  return [](double, int k) { return k == 0 ? 1.0 : 0.0; };
}

ScalarPotential make_harmonic(int d, double k) {
  SmoothField f = SmoothField::constant(d, 0.0);
  for (int j = 0; j < d; ++j) {
    std::vector<std::function<double(double, int)>> fs(2, one1d());
    fs[j] = monomial1d(k, 2);
    f = f + separable_field(d, fs);
  }
  return ScalarPotential{d, f, kSigmaInfinite, 0.0};
}

ScalarPotential make_quartic(int d, double q) {
  SmoothField f = make_harmonic(d, 1.0).f;
  for (int j = 0; j < d; ++j) {
    std::vector<std::function<double(double, int)>> fs(2, one1d());
    fs[j] = monomial1d(q, 4);
    f = f + separable_field(d, fs);
  }
  return ScalarPotential{d, f, kSigmaInfinite, 0.0};
}

ScalarPotential make_gaussian_well(int d, double depth, double w) {
  std::vector<std::function<double(double, int)>> fs(2, one1d());
  for (int j = 0; j < d; ++j) fs[j] = gaussian1d(w);
  SmoothField f = separable_field(d, fs).scaled(-depth);
  return ScalarPotential{d, f, 0.0, depth};
}

ScalarPotential make_zero_potential(int d) {
  return ScalarPotential{d, SmoothField::constant(d, 0.0), kSigmaInfinite, 0.0};
}

VectorPotential make_zero_gauge(int d) {
  VectorPotential A;
  A.d = d;
  for (int j = 0; j < d; ++j) A.comp.push_back(SmoothField::constant(d, 0.0));
  return A;
}

VectorPotential make_landau_gauge(double b) {
  VectorPotential A;
  A.d = 2;
  A.comp.push_back(SmoothField::constant(2, 0.0));
  A.comp.push_back(separable_field(2, {monomial1d(b, 1), one1d()}));
  return A;
}

VectorPotential make_symmetric_gauge(double b) {
  VectorPotential A;
  A.d = 2;
  A.comp.push_back(separable_field(2, {one1d(), monomial1d(-0.5 * b, 1)}));
  A.comp.push_back(separable_field(2, {monomial1d(0.5 * b, 1), one1d()}));
  return A;
}

VectorPotential make_gradient_gauge(const GaugeFunction& phi) {
  VectorPotential A;
  A.d = phi.d;
  for (int j = 0; j < phi.d; ++j) A.comp.push_back(phi.phi.derivative(MultiIndex::unit(phi.d, j)));
  return A;
}

VectorPotential make_bump_gauge(double b, double w) {
  // A_1 = 0, A_2(x) = int_0^{x_1} B_12(s, x_2) ds
  //              = b (w sqrt(pi)/2) erf(x_1/w) exp(-x_2^2/w^2)
  auto erf_part = [w](double t, int k) -> double {
    if (k == 0) return (w * std::sqrt(M_PI) / 2.0) * std::erf(t / w);
    return gaussian1d(w)(t, k - 1);
  };
  VectorPotential A;
  A.d = 2;
  A.comp.push_back(SmoothField::constant(2, 0.0));
  A.comp.push_back(separable_field(2, {erf_part, gaussian1d(w)}).scaled(b));
  return A;
}

MagneticField make_zero_field(int d) {
  MagneticField B;
  B.d = d;
  return B;
}

MagneticField make_constant_field(double b) {
  MagneticField B;
  B.d = 2;
  B.b12 = SmoothField::constant(2, b);
  return B;
}

MagneticField make_gaussian_bump_field(double b, double w) {
  MagneticField B;
  B.d = 2;
  B.b12 = separable_field(2, {gaussian1d(w), gaussian1d(w)}).scaled(b);
  return B;
}

}  // namespace magtrace
