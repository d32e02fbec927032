#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "conewave/geometry.hpp"
#include "conewave/region.hpp"
#include "conewave/state.hpp"

namespace conewave {

// Q^{cone}_{energy}: QmMinus = Q₋⁻, QpMinus = Q₊⁻ (backward cone |x|+t = s),
// QmPlus = Q₋⁺, QpPlus = Q₊⁺ (forward cone t-|x| = τ).
enum class ConeKind { QmMinus, QpMinus, QmPlus, QpPlus };
enum class EnergySide { Inward, Outward };

std::string to_string(ConeKind k);
std::string to_string(EnergySide s);

struct ConeFlux {
  double value = 0.0;
  bool tip_truncated = false;
  double tip_radius = 0.0;
};

// Cone flux over t1 ≤ t ≤ t2 with the near-tip part (radius < 2h) dropped.
ConeFlux cone_flux(const SpacetimeTrace& trace, ConeKind kind, double apex, double t1, double t2);

// Inward/outward-energy flux through |x| = r0 over [t1, t2]; outward_normal = false negates.
double cylinder_flux(const SpacetimeTrace& trace, double r0, double t1, double t2, EnergySide side,
                     bool outward_normal = true);

// 𝓜(Ω) = ∬_Ω (p-1)/(2(p+1))·|u|^(p+1)/|x| + ½|∇̸u|²/|x|.
double morawetz_integral(const SpacetimeTrace& trace, const RegionSpec& region);

// Spacetime integral over a region of a pointwise density with time dependence.
double region_integral(const SpacetimeTrace& trace, const RegionSpec& region,
                       const std::function<double(const CellData&, double t)>& f);

enum class MuMethod { OriginOracle, CylinderExtrapolation, Both };

struct MuEstimate {
  std::vector<double> t;
  std::vector<double> P_origin;    // π μ([t1, t]) from |u(0,t)|²
  std::vector<double> P_cylinder;  // cylinder-limit estimator (empty if not requested)
  std::array<double, 3> radii{};
  double cylinder_error = 0.0;     // spread between the two Richardson pairs at t2
  double discrepancy = 0.0;        // |P_cyl - P_origin|/P_origin at t2
  bool flagged = false;            // discrepancy above 5%
  double total() const { return P_origin.empty() ? 0.0 : P_origin.back(); }
};

MuEstimate estimate_mu(const SpacetimeTrace& trace, double t1, double t2,
                       MuMethod method = MuMethod::Both);

// Instantaneous rates behind the two μ estimators at one state: π|u(0,t)|² and the inward
// cylinder flux density through |x| = 4h, 8h, 16h.
struct MuRates {
  double origin = 0.0;
  std::array<double, 3> cylinder{};
};
std::array<double, 3> mu_radii(const Grid& g);
MuRates mu_rates(const SimState& s, bool with_cylinder = true);
// Cumulative estimates from rates sampled at times t (streaming runs use this directly).
MuEstimate mu_from_rates(const std::vector<double>& t, const std::vector<MuRates>& rates,
                         const std::array<double, 3>& radii, MuMethod method = MuMethod::Both);

// π μ([t1, t2]) by the origin oracle.
double pi_mu(const SpacetimeTrace& trace, double t1, double t2);

struct LedgerEntry {
  int segment_id = 0;
  SegmentType type = SegmentType::TAxis;
  std::string integrand;
  double value = 0.0;
};

struct FluxLedger {
  std::string region_id;
  EnergySide which = EnergySide::Inward;
  RegionSpec region;
  std::vector<LedgerEntry> entries;
  double mu_term = 0.0;         // +πμ (inward) or -πμ (outward) over t-axis pieces
  double morawetz = 0.0;        // 𝓜(Ω) ≥ 0
  double morawetz_term = 0.0;   // -𝓜 (inward) or +𝓜 (outward): right-hand side
  double residual = 0.0;        // Σ values + mu_term - morawetz_term
  double h = 0.0;
  double dt_store = 0.0;
  double tip_radius = 0.0;
  bool tip_truncated = false;
};

// Value of one boundary piece.
double segment_value(const SpacetimeTrace& trace, const Segment& seg, EnergySide which,
                     bool* tip_truncated = nullptr);

FluxLedger flux_balance(const SpacetimeTrace& trace, const RegionSpec& region, EnergySide which,
                        const std::string& region_id = "region");

struct EnergyClosure {
  double in_plus_out = 0.0;  // residual_in + residual_out (μ and 𝓜 cancel)
  double classical = 0.0;    // Σ classical full-energy fluxes over the same boundary
  double scale = 0.0;        // energy on the lowest time slice, for normalization
};
EnergyClosure full_energy_closure(const SpacetimeTrace& trace, const RegionSpec& region);

}  // namespace conewave
