#include "magtrace/profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "magtrace/quadrature.hpp"

namespace magtrace {

double BumpProfile::deriv(double t, int k) const {
  if (k < 0 || k > 4) throw std::invalid_argument("BumpProfile: derivative order > 4");
  double s = (t - c) / w;
  double D = 1.0 - s * s;
  if (D <= 0.0) return 0.0;
  double g = std::exp(-1.0 / D);
  if (g == 0.0) return 0.0;
  if (k == 0) return g;
  // derivatives of u(s) = -1/(1-s^2)
  double D2 = D * D, D3 = D2 * D, D4 = D3 * D, D5 = D4 * D;
  double u1 = -2.0 * s / D2;
  double u2 = -2.0 / D2 - 8.0 * s * s / D3;
  double u3 = -24.0 * s / D3 - 48.0 * s * s * s / D4;
  double u4 = -24.0 / D3 - 288.0 * s * s / D4 - 384.0 * s * s * s * s / D5;
  double r;
  switch (k) {
    case 1: r = u1 * g; break;
    case 2: r = (u2 + u1 * u1) * g; break;
    case 3: r = (u3 + 3.0 * u1 * u2 + u1 * u1 * u1) * g; break;
    default:
      r = (u4 + 4.0 * u1 * u3 + 3.0 * u2 * u2 + 6.0 * u1 * u1 * u2 + u1 * u1 * u1 * u1) * g;
  }
  return r / std::pow(w, k);
}

namespace {

// kernel exp(-1/(u(1-u))) on (0,1) and its derivatives up to 2
double step_kernel(double u, int k) {
  double P = u * (1.0 - u);
  if (P <= 0.0) return 0.0;
  double phi = std::exp(-1.0 / P);
  if (phi == 0.0) return 0.0;
  if (k == 0) return phi;
  double P1 = 1.0 - 2.0 * u, P2 = -2.0;
  double r1 = P1 / (P * P);
  double r2 = -2.0 * P1 * P1 / (P * P * P) + P2 / (P * P);
  if (k == 1) return r1 * phi;
  return (r2 + r1 * r1) * phi;
}

double kernel_mass() {
  static double Z = gauss_integrate([](double u) { return step_kernel(u, 0); }, 0.0, 1.0, 64);
  return Z;
}

}  // namespace

double SmoothStep::value(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return gauss_integrate([](double v) { return step_kernel(v, 0); }, 0.0, u, 64) / kernel_mass();
}

double SmoothStep::deriv(double u, int k) const {
  if (k == 0) return value(u);
  if (k < 1 || k > 3) throw std::invalid_argument("SmoothStep: derivative order > 3");
  return step_kernel(u, k - 1) / kernel_mass();
}

double SmoothStep::antideriv(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) {
    // int_0^1 S = 1/2 by the symmetry S(u) + S(1-u) = 1
    return 0.5 + (u - 1.0);
  }
  double m = gauss_integrate([](double v) { return v * step_kernel(v, 0); }, 0.0, u, 64);
  return u * value(u) - m / kernel_mass();
}

}  // namespace magtrace
