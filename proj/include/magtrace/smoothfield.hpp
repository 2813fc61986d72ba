#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "magtrace/multiindex.hpp"

namespace magtrace {

using Vec = std::array<double, 2>;  // points in dimension 1 or 2 (unused slot = 0)

std::vector<MultiIndex> multi_indices_below(const MultiIndex& a);  // all b <= a
long binomial(const MultiIndex& a, const MultiIndex& b);           // a! / (b! (a-b)!)

// A C^k function of x with analytic partial derivatives up to `order`.
// Immutable; evaluation is pure.
class SmoothField {
 public:
  using Evaluator = std::function<double(const Vec&, const MultiIndex&)>;

  SmoothField() = default;
  SmoothField(int dim, int order, Evaluator ev)
      : d_(dim), order_(order), ev_(std::move(ev)) {}

  int dim() const { return d_; }
  int deriv_order() const { return order_; }
  bool valid() const { return static_cast<bool>(ev_); }

  double operator()(const Vec& x) const { return ev_(x, MultiIndex(d_)); }
  double deriv(const Vec& x, const MultiIndex& a) const;

  // field of the partial derivative d^a f (loses |a| orders)
  SmoothField derivative(const MultiIndex& a) const;

  static SmoothField constant(int dim, double c);

  SmoothField operator+(const SmoothField& g) const;
  SmoothField operator-(const SmoothField& g) const;
  SmoothField operator*(const SmoothField& g) const;  // Leibniz rule
  SmoothField scaled(double c) const;

 private:
  int d_ = 1;
  int order_ = 0;
  Evaluator ev_;
};

}  // namespace magtrace
