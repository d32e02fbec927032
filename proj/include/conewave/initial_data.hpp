#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conewave/problem.hpp"

namespace conewave {

// Axisymmetric data as closed-form samplers in cylindrical coordinates (ρ, z).
struct InitialData {
  std::string family;
  std::function<double(double, double)> u0;
  // (∂ρ u0, ∂z u0)
  std::function<std::pair<double, double>(double, double)> grad_u0;
  std::function<double(double, double)> u1;
  double support_radius = 0.0;  // both samplers vanish for |x| > R0
  bool radial = false;          // depends on |x| only
};

enum class AngularProfile { Monopole, ZTilt };

InitialData gaussian_data(double amplitude, double sigma, double z0, AngularProfile profile);

struct DataFamily {
  std::string name;
  std::string description;
  std::vector<std::string> parameters;
};
std::vector<DataFamily> data_families();

struct WeightedEnergyReport {
  double E = 0.0;
  double E_kappa = 0.0;
  double K = 0.0;
  double E_10 = 0.0;
  double kappa = 0.0;
  double rel_error = 0.0;  // change under quadrature refinement
  bool converged = true;
};

// Composite Gauss–Legendre (8 nodes per cell) in (r, cosθ); convergence judged by doubling.
WeightedEnergyReport weighted_energies(const InitialData& data, const ProblemSpec& problem,
                                       double kappa);

// Quadratures behind the 𝐋-versus-∂ᵣ identities on the shell a < |x| < b:
// ∫|𝐋u0|², ∫|∂ᵣu0|², and (1/R)∫_{|x|=R}|u0|² dσ at R = a and R = b (zero when R = 0).
struct OperatorIntegrals {
  double L2 = 0.0;
  double ur2 = 0.0;
  double sphere_a = 0.0;
  double sphere_b = 0.0;
};
OperatorIntegrals operator_integrals(const InitialData& data, double a, double b);

// ∫|x|^κ[¼|𝐋₊|² + ¼|𝐋₋|² + ½|∇̸u0|² + |u0|^(p+1)/(p+1)] and the full weighted energy
// ∫|x|^κ[½|∇u0|² + ½|u1|² + |u0|^(p+1)/(p+1)].
std::pair<double, double> weighted_comparison(const InitialData& data, const ProblemSpec& problem,
                                              double kappa);

// Radial transition: 0 for |x| ≤ ½, 1 for |x| ≥ 1, built from exp(-1/s).
double cutoff_profile(double x);
double cutoff_profile_derivative(double x);

// (φ(x/r)·u0, φ(x/r)·u1).
InitialData cutoff_data(const InitialData& data, double r);

// ∫_{a<|x|<b} g(u0, ∇u0, u1, x) dx for a user integrand; exposed for cross-checks.
double integrate_data(const InitialData& data, double a, double b,
                      const std::function<double(double r, double ct, double u, double u_r,
                                                 double u_th, double v)>& f);

}  // namespace conewave
