#pragma once

namespace magtrace {

// The standard bump exp(-1/(1-s^2)) on |s|<1, scaled to center c, half-width w.
// Derivatives up to order 4 are closed-form (Faa di Bruno on the exponent).
struct BumpProfile {
  double c = 0.0;
  double w = 1.0;

  double value(double t) const { return deriv(t, 0); }
  double deriv(double t, int k) const;  // k <= 4
};

// C^inf step 0 -> 1 on [0,1] built from exp(-1/(u(1-u))); derivatives up to 3.
struct SmoothStep {
  double value(double u) const;
  double deriv(double u, int k) const;      // k in 1..3 (k=0 -> value)
  double antideriv(double u) const;         // int_0^u S, via integration by parts
};

}  // namespace magtrace
