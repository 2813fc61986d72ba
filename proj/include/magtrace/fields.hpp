#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "magtrace/smoothfield.hpp"

namespace magtrace {

inline constexpr double kSigmaInfinite = std::numeric_limits<double>::infinity();

// Electric potential V with analytic derivatives up to order 4.
// sigma_inf is the liminf of V at infinity (kSigmaInfinite for confining wells).
struct ScalarPotential {
  int d = 1;
  SmoothField f;
  double sigma_inf = kSigmaInfinite;
  double lower_bound = 0.0;

  double operator()(const Vec& x) const { return f(x); }
  double deriv(const Vec& x, const MultiIndex& a) const { return f.deriv(x, a); }
  double laplacian(const Vec& x) const;
  double grad_sq(const Vec& x) const;
};

struct VectorPotential {
  int d = 1;
  std::vector<SmoothField> comp;  // A_j, j = 0..d-1

  double operator()(int j, const Vec& x) const { return comp[j](x); }
  double deriv(int j, const Vec& x, const MultiIndex& a) const { return comp[j].deriv(x, a); }
};

// Antisymmetric 2-form; only the upper triangle is stored (d=2: the single
// component B_12).  d=1 has no magnetic field.
struct MagneticField {
  int d = 1;
  SmoothField b12;  // valid only when d == 2

  double component(int j, int k, const Vec& x) const;
  double component_deriv(int j, int k, const Vec& x, const MultiIndex& a) const;
  bool is_zero() const { return d < 2 || !b12.valid(); }
};

struct GaugeFunction {
  int d = 1;
  SmoothField phi;

  double operator()(const Vec& x) const { return phi(x); }
  double grad(int j, const Vec& x) const { return phi.deriv(x, MultiIndex::unit(d, j)); }
};

// --- operations -------------------------------------------------------------

MagneticField curl(const VectorPotential& A);
VectorPotential gauge_shift(const VectorPotential& A, const GaugeFunction& phi);

// integral of the 1-form A along the oriented segment [x, y]
double line_integral(const VectorPotential& A, const Vec& x, const Vec& y, int order = 8);

// flux of B through the oriented triangle <x-y-z, x+y-z, x-y+z>
double triangle_flux(const MagneticField& B, const Vec& x, const Vec& y, const Vec& z,
                     int order = 12);

// sum over j<k of B_jk(x)^2
double norm_sq(const MagneticField& B, const Vec& x);

// Agmon cutoff: V -> chi(V) with chi(t) = t below (E+Sigma)/2 and chi' = 0
// above (E+2 Sigma)/3.  A confining Sigma_V is capped at sigma_ceiling.
ScalarPotential cutoff_modify(const ScalarPotential& V, double E, double sigma_ceiling = 10.0);

// chain rule composition: outer(t, k) gives the k-th derivative of the outer
// function, k <= order
SmoothField compose(const std::function<double(double, int)>& outer, const SmoothField& inner,
                    int order);

// --- builtin families -------------------------------------------------------

ScalarPotential make_harmonic(int d, double k = 1.0);
ScalarPotential make_quartic(int d, double q = 0.25);       // |x|^2 + q sum x_j^4
ScalarPotential make_gaussian_well(int d, double depth, double w);  // -depth exp(-|x|^2/w^2)
ScalarPotential make_zero_potential(int d);

VectorPotential make_zero_gauge(int d);
VectorPotential make_landau_gauge(double b);                // (0, b x_1)
VectorPotential make_symmetric_gauge(double b);             // (-b x_2/2, b x_1/2)
VectorPotential make_gradient_gauge(const GaugeFunction& phi);
// explicit gauge for the Gaussian-bump field: A_1 = 0, A_2 = int_0^{x_1} B_12
VectorPotential make_bump_gauge(double b, double w);

MagneticField make_zero_field(int d);
MagneticField make_constant_field(double b);                // d=2
MagneticField make_gaussian_bump_field(double b, double w); // B_12 = b exp(-|x|^2/w^2)

// separable helpers reused by the registry
SmoothField separable_field(int dim, std::vector<std::function<double(double, int)>> axis_funcs,
                            int order = 4);
std::function<double(double, int)> monomial1d(double coef, int power);
std::function<double(double, int)> gaussian1d(double w);  // exp(-t^2/w^2)

}  // namespace magtrace
