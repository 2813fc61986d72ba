#include "magtrace/smoothfield.hpp"

#include <stdexcept>

namespace magtrace {

std::vector<MultiIndex> multi_indices_below(const MultiIndex& a) {
  std::vector<MultiIndex> out;
  if (a.d == 1) {
    for (int i = 0; i <= a.e[0]; ++i) out.push_back(MultiIndex(1, {i}));
  } else {
    for (int i = 0; i <= a.e[0]; ++i)
      for (int j = 0; j <= a.e[1]; ++j) out.push_back(MultiIndex(2, {i, j}));
  }
  return out;
}

long binomial(const MultiIndex& a, const MultiIndex& b) {
  return a.factorial() / (b.factorial() * (a - b).factorial());
}

double SmoothField::deriv(const Vec& x, const MultiIndex& a) const {
  if (a.order() > order_)
    throw std::runtime_error("SmoothField: derivative order exceeds available order");
  return ev_(x, a);
}

SmoothField SmoothField::derivative(const MultiIndex& a) const {
  if (a.order() > order_)
    throw std::runtime_error("SmoothField: derivative order exceeds available order");
  auto ev = ev_;
  return SmoothField(d_, order_ - a.order(),
                     [ev, a](const Vec& x, const MultiIndex& b) { return ev(x, a + b); });
}

SmoothField SmoothField::constant(int dim, double c) {
  return SmoothField(dim, 8, [c](const Vec&, const MultiIndex& a) {
    return a.order() == 0 ? c : 0.0;
  });
}

SmoothField SmoothField::operator+(const SmoothField& g) const {
  auto f1 = ev_, f2 = g.ev_;
  return SmoothField(d_, std::min(order_, g.order_),
                     [f1, f2](const Vec& x, const MultiIndex& a) { return f1(x, a) + f2(x, a); });
}

SmoothField SmoothField::operator-(const SmoothField& g) const {
  auto f1 = ev_, f2 = g.ev_;
  return SmoothField(d_, std::min(order_, g.order_),
                     [f1, f2](const Vec& x, const MultiIndex& a) { return f1(x, a) - f2(x, a); });
}

SmoothField SmoothField::operator*(const SmoothField& g) const {
  auto f1 = ev_, f2 = g.ev_;
  return SmoothField(d_, std::min(order_, g.order_),
                     [f1, f2](const Vec& x, const MultiIndex& a) {
                       double s = 0.0;
                       for (const MultiIndex& b : multi_indices_below(a))
                         s += binomial(a, b) * f1(x, b) * f2(x, a - b);
                       return s;
                     });
}

SmoothField SmoothField::scaled(double c) const {
  auto f = ev_;
  return SmoothField(d_, order_, [f, c](const Vec& x, const MultiIndex& a) { return c * f(x, a); });
}

}  // namespace magtrace
