#pragma once

#include <limits>
#include <string>
#include <vector>

#include "conewave/flux.hpp"
#include "conewave/state.hpp"

namespace conewave {

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string provenance;
  double tol = 1e-2;
};

// margin = rhs - lhs; pass ⇔ margin ≥ -tol·|rhs|.
BoundCheck make_check(std::string name, double lhs, double rhs, std::string provenance,
                      double tol = 1e-2);

struct EnergySeries {
  std::vector<double> t;
  std::vector<double> E;
  std::vector<double> E_minus;
  std::vector<double> E_plus;
};
EnergySeries energy_series(const SpacetimeTrace& trace);

// Windowed LHS of the global Morawetz inequality versus 2E; NaN bounds mean [max(0, t_first), t_last].
BoundCheck morawetz_bound_check(const SpacetimeTrace& trace, double R, double E,
                                double t1 = std::numeric_limits<double>::quiet_NaN(),
                                double t2 = std::numeric_limits<double>::quiet_NaN());

// π∫ t^κ dμ + ∬_{t≥0} (|x|+t)^κ[(p-1-2γ)/(2(p+1))·|u|^(p+1)/|x| + (1-γ)/2·|∇̸u|²/|x|] ≤ K₁.
BoundCheck weighted_morawetz_check(const SpacetimeTrace& trace, double kappa, double gamma,
                                   double K1);
// p = 3, a(r) = r: π∫ t dμ + ∬ (t/|x|)(¼|u|⁴ + ½|∇̸u|²) ≤ K₁ (κ = 1).
BoundCheck weighted_morawetz_p3(const SpacetimeTrace& trace, double K1);

struct DecayFit {
  double T0 = 0.0;
  double T1 = 0.0;
  double alpha = 0.0;
  double C = 0.0;
  double residual = 0.0;
  int samples = 0;
  int skipped = 0;
  double sup_weighted = 0.0;  // sup t^κ E₋(t) on the window
  double C_fit = 0.0;         // sup_weighted / K
};
// Least squares of log E₋ against log t over [T0, T1] (t ≥ 1); κ, K for the bound constant.
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& E_minus, double T0,
                   double T1, double kappa = 0.0, double K = 0.0);

// sup_{[T0, T_j]} t^κE₋ for nested windows; passes when it does not grow past the first window.
BoundCheck decay_surrogate_check(const std::vector<double>& t, const std::vector<double>& E_minus,
                                 double kappa, double T0, const std::vector<double>& window_ends);

struct InnerConeSeries {
  double c = 0.0;
  std::vector<double> t;
  std::vector<double> E_minus;
  std::vector<double> E_plus;
  double first_quarter_mean = 0.0;
  double last_quarter_mean = 0.0;
  bool conclusive = false;
  bool decreasing = false;
};
InnerConeSeries inner_cone_energy(const SpacetimeTrace& trace, double c);
// Fills the quarter means and verdicts from t / E_minus already collected.
void summarize_inner_cone(InnerConeSeries& s);

struct ScatteringNorms {
  double q = 0.0;
  std::vector<double> t;
  std::vector<double> Lp1;     // ‖u(t)‖_{L^{p+1}}
  std::vector<double> st_rate; // ∫|u(t)|^{2(p-1)} dx
  double LqLp1 = 0.0;          // (∫‖u‖_{p+1}^q dt)^{1/q}
  double Lst = 0.0;            // (∬|u|^{2(p-1)})^{1/(2(p-1))}
  bool q_in_regime = true;     // q > (p+1)/κ was requested
  // ∫_a^b ‖u‖_{p+1}^q dt and ∫_a^b ∫|u|^{2(p-1)} dt.
  double q_increment(double a, double b) const;
  double st_increment(double a, double b) const;
};
ScatteringNorms scattering_norms(const SpacetimeTrace& trace, double q, double kappa = 0.0);

struct FluxBoundsConfig {
  double E = 0.0;
  int n_cones = 8;
  double lift_t0 = 0.0;
  double lift_r1 = 0.5;
  double lift_r2 = 0.0;  // 0 → chosen from the window
};
std::vector<BoundCheck> measure_and_flux_bounds(const SpacetimeTrace& trace,
                                                const FluxBoundsConfig& cfg);

// ∫_{r1}^{r2} Q₋⁻(t0+r; t0, t0+r) dr versus r2·𝓜(cone shell).
BoundCheck lift_of_r_check(const SpacetimeTrace& trace, double t0, double r1, double r2,
                           int n_r = 41);

// Least-squares slope of Q₋⁻(s; t_first, s) over the largest admissible s; passes if ≤ noise.
BoundCheck flux_decay_trend(const SpacetimeTrace& trace, int n_s = 12);

}  // namespace conewave
