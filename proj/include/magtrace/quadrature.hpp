#pragma once

#include <functional>
#include <vector>

namespace magtrace {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order (number of nodes), cached.
const GaussRule& gauss_legendre(int n);

// integral of f over [a, b] with an n-point Gauss-Legendre rule
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

// composite rule: [a, b] split into equal panels with an n-point rule on each;
// needed for sharply peaked integrands (high derivatives of bump profiles)
double gauss_integrate_composite(const std::function<double(double)>& f, double a, double b, int n,
                                 int panels);

}  // namespace magtrace
