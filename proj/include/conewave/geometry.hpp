#pragma once

#include <functional>
#include <span>
#include <vector>

#include "conewave/interpolate.hpp"
#include "conewave/region.hpp"
#include "conewave/state.hpp"

namespace conewave {

// Pointwise quantities at one cell (or one interpolated point).
struct CellData {
  double r = 0.0;      // |x|
  double u = 0.0;
  double ut = 0.0;
  double ur = 0.0;     // ∂ᵣu
  double uang2 = 0.0;  // |∇̸u|²
  double grad2 = 0.0;  // |∇u|²
  double Lu() const { return ur + u / r; }
};

CellData point_data(const CylValues& v, double rho, double z, bool radial);

// Integrand split as regular + coef·u²/r²; the singular part gets exact cell weights.
struct Density {
  double regular = 0.0;
  double inv_r2_coef = 0.0;
};

// Cellwise fields (cell order of the grid).
std::vector<double> apply_L(const SimState& s);
std::pair<std::vector<double>, std::vector<double>> apply_Lpm(const SimState& s);
std::vector<double> slashed_grad_sq(const SimState& s);
std::vector<CellData> cell_data(const SimState& s);

enum class DensityKind { Full, Inward, Outward, Potential, Angular };
Density density(const CellData& c, const ProblemSpec& pr, DensityKind kind);

struct Energies {
  double E = 0.0;
  double E_minus = 0.0;
  double E_plus = 0.0;
};
// Annulus r1 < |x| < r2 (midpoint rule with partial-cell volume weights).
Energies energies(const SimState& s, double r1, double r2);
// Whole grid.
Energies energies(const SimState& s);

// ∫|𝐋u|² and ∫|∂ᵣu|² over r1 < |x| < r2.
std::pair<double, double> grid_operator_integrals(const SimState& s, double r1, double r2);

// ∫_{|x|=R} |u|² dσ (64-point rule in cosθ for Axisym2D).
double sphere_u2(const SimState& s, double R);

// Generic shell integral ∫_{∪ shells} f dx, f given per cell as Density.
double integrate_shells(const SimState& s, std::span<const Interval> shells,
                        const std::function<Density(const CellData&)>& f);

// Integral of f over the sphere |x| = R: R²∫ f sinθ dθ dφ.
double integrate_sphere(const SimState& s, double R, const std::function<double(const CellData&)>& f);

}  // namespace conewave
