#pragma once

#include <cmath>

namespace conewave {

// Exponent and coupling of u_tt - Δu = -coupling·|u|^(p-1)u.
// coupling is 1 (defocusing) or 0 (linear wave equation, used as an oracle).
struct ProblemSpec {
  double p = 3.0;
  double coupling = 1.0;

  static ProblemSpec make(double p, double coupling = 1.0);

  double s_p() const { return 1.5 - 2.0 / (p - 1.0); }

  // |u|^e with fast paths for the even integer powers that dominate p = 3, 5.
  static double abs_pow(double u, double e) {
    const double a = std::fabs(u);
    if (e == 4.0) { const double s = a * a; return s * s; }
    if (e == 6.0) { const double s = a * a; return s * s * s; }
    if (e == 2.0) return a * a;
    return std::pow(a, e);
  }

  // coupling·|u|^(p+1)/(p+1)
  double potential(double u) const {
    return coupling == 0.0 ? 0.0 : coupling * abs_pow(u, p + 1.0) / (p + 1.0);
  }
  // coupling·|u|^(p-1)·u
  double force(double u) const {
    if (coupling == 0.0) return 0.0;
    if (p == 3.0) return coupling * u * u * u;
    if (p == 5.0) { const double s = u * u; return coupling * s * s * u; }
    return coupling * std::pow(std::fabs(u), p - 1.0) * u;
  }
};

}  // namespace conewave
