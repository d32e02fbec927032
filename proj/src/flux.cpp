#include "conewave/flux.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conewave/errors.hpp"
#include "conewave/interpolate.hpp"
#include "conewave/quadrature.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;

// Calls fn with the state at time t, avoiding a copy when t is a stored time.
template <class F>
double at_time(const SpacetimeTrace& tr, double t, F&& fn) {
  const auto br = tr.locate(t);
  if (br.w == 0.0) return fn(tr[br.j]);
  if (br.w == 1.0) return fn(tr[br.j + 1]);
  return fn(tr.state_at(t));
}

// ∫_{t1}^{t2} g(state(t), t) dt by trapezoid over stored times plus the endpoints.
template <class G>
double time_integral(const SpacetimeTrace& tr, double t1, double t2, G&& g) {
  if (t2 <= t1) return 0.0;
  const auto ts = tr.sample_times(t1, t2);
  std::vector<double> f(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k)
    f[k] = at_time(tr, ts[k], [&](const SimState& s) { return g(s, ts[k]); });
  return quad::trapezoid(ts, f);
}

double cone_density(const CellData& c, const ProblemSpec& pr, ConeKind kind) {
  switch (kind) {
    case ConeKind::QmMinus:
    case ConeKind::QpPlus:
      return pr.potential(c.u) + 0.5 * c.uang2;
    case ConeKind::QpMinus: {
      const double l = c.Lu() - c.ut;
      return 0.5 * l * l;
    }
    case ConeKind::QmPlus: {
      const double l = c.Lu() + c.ut;
      return 0.5 * l * l;
    }
  }
  return 0.0;
}

bool backward(ConeKind k) { return k == ConeKind::QmMinus || k == ConeKind::QpMinus; }

// Table integrand on |x| = r0 with the outward (+r) normal.
double cylinder_density(const CellData& c, const ProblemSpec& pr, EnergySide side) {
  const double half_pot = 0.5 * pr.potential(c.u);
  if (side == EnergySide::Inward) {
    const double l = c.Lu() + c.ut;
    return -0.25 * l * l + 0.25 * c.uang2 + half_pot;
  }
  const double l = c.Lu() - c.ut;
  return 0.25 * l * l - 0.25 * c.uang2 - half_pot;
}

void check_window(const SpacetimeTrace& tr, double t1, double t2) {
  if (!(t2 >= t1)) throw DomainError("time window reversed");
  if (!tr.contains(t1) || !tr.contains(t2)) throw DomainError("time window outside the trace");
}

std::vector<double> vertex_times(const RegionSpec& region) {
  std::vector<double> ts;
  for (const auto& v : region.vertices) ts.push_back(v.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
           ts.end());
  return ts;
}

}  // namespace

std::string to_string(ConeKind k) {
  switch (k) {
    case ConeKind::QmMinus: return "Q_minus_backward";
    case ConeKind::QpMinus: return "Q_plus_backward";
    case ConeKind::QmPlus: return "Q_minus_forward";
    case ConeKind::QpPlus: return "Q_plus_forward";
  }
  return "?";
}

std::string to_string(EnergySide s) { return s == EnergySide::Inward ? "inward" : "outward"; }

ConeFlux cone_flux(const SpacetimeTrace& tr, ConeKind kind, double apex, double t1, double t2) {
  check_window(tr, t1, t2);
  const bool bw = backward(kind);
  if (bw ? t2 > apex + 1e-12 : t1 < apex - 1e-12)
    throw DomainError("cone window must lie on the cone (t <= s backward, t >= tau forward)");
  ConeFlux out;
  const double tip = 2.0 * tr.grid().h();
  out.tip_radius = tip;
  double a = t1, b = t2;
  if (bw && apex - b < tip) {
    b = apex - tip;
    out.tip_truncated = true;
  }
  if (!bw && a - apex < tip) {
    a = apex + tip;
    out.tip_truncated = true;
  }
  if (b <= a) return out;
  const double reach = tr.grid().reach();
  const double rmax = bw ? apex - a : b - apex;
  if (rmax > reach + 1e-9) throw DomainError("cone leaves the grid");
  const ProblemSpec pr = tr.problem();
  auto sphere = [&](const SimState& s, double t) {
    const double R = bw ? apex - t : t - apex;
    return integrate_sphere(s, R, [&](const CellData& c) { return cone_density(c, pr, kind); });
  };
  out.value = time_integral(tr, a, b, sphere);
  // Close the cut piece by a trapezoid; at the apex 4πR²·½|L∓u|² → 2π u(0)² and the
  // potential/angular kinds vanish.
  const double end = bw ? t2 : t1, cut = bw ? b : a;
  if (out.tip_truncated && tr.contains(end)) {
    const double edge = at_time(tr, cut, [&](const SimState& s) { return sphere(s, cut); });
    double last = 0.0;
    if (std::fabs(end - apex) > 1e-12) {
      last = at_time(tr, end, [&](const SimState& s) { return sphere(s, end); });
    } else if (kind == ConeKind::QpMinus || kind == ConeKind::QmPlus) {
      const double u0 = at_time(tr, apex, [](const SimState& s) { return origin_value(s); });
      last = 2.0 * kPi * u0 * u0;
    }
    out.value += 0.5 * std::fabs(end - cut) * (edge + last);
  }
  return out;
}

double cylinder_flux(const SpacetimeTrace& tr, double r0, double t1, double t2, EnergySide side,
                     bool outward_normal) {
  check_window(tr, t1, t2);
  if (r0 < 2.0 * tr.grid().h() * (1.0 - 1e-12)) throw DomainError("cylinder radius below 2h");
  if (r0 > tr.grid().reach()) throw DomainError("cylinder leaves the grid");
  const ProblemSpec pr = tr.problem();
  const double v = time_integral(tr, t1, t2, [&](const SimState& s, double) {
    return integrate_sphere(s, r0, [&](const CellData& c) { return cylinder_density(c, pr, side); });
  });
  return outward_normal ? v : -v;
}

double region_integral(const SpacetimeTrace& tr, const RegionSpec& region,
                       const std::function<double(const CellData&, double)>& f) {
  const double tmin = region.t_min(), tmax = region.t_max();
  check_window(tr, tmin, tmax);
  const double extent = tr.grid().radial() ? tr.grid().R_max : std::hypot(tr.grid().P_max, tr.grid().Z_max);
  if (region.r_max() > extent) throw DomainError("region leaves the grid");
  const auto breaks = vertex_times(region);
  const double delta = 1e-9 * std::max(1.0, tmax - tmin);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    // the slice width is affine on each piece; sample just inside the kinks
    std::vector<double> ts{a + delta};
    for (double t : tr.sample_times(a, b))
      if (t > a + delta && t < b - delta) ts.push_back(t);
    ts.push_back(b - delta);
    std::vector<double> vals(ts.size());
    for (std::size_t q = 0; q < ts.size(); ++q) {
      const double t = ts[q];
      const auto shells = slice(region, t);
      vals[q] = at_time(tr, t, [&](const SimState& s) {
        return integrate_shells(s, shells, [&](const CellData& c) { return Density{f(c, t), 0.0}; });
      });
    }
    // the δ-offsets are extrapolated back to the kinks
    ts.front() = a;
    ts.back() = b;
    total += quad::trapezoid(ts, vals);
  }
  return total;
}

double morawetz_integral(const SpacetimeTrace& tr, const RegionSpec& region) {
  const ProblemSpec pr = tr.problem();
  const double c_pot = (pr.p - 1.0) / 2.0;  // (p-1)/(2(p+1))·|u|^(p+1) = (p-1)/2 · potential
  return region_integral(tr, region, [&](const CellData& c, double) {
    return (c_pot * pr.potential(c.u) + 0.5 * c.uang2) / c.r;
  });
}

double pi_mu(const SpacetimeTrace& tr, double t1, double t2) {
  check_window(tr, t1, t2);
  return kPi * time_integral(tr, t1, t2, [](const SimState& s, double) {
    const double u0 = origin_value(s);
    return u0 * u0;
  });
}

std::array<double, 3> mu_radii(const Grid& g) {
  const double h = g.h();
  return {4.0 * h, 8.0 * h, 16.0 * h};
}

MuRates mu_rates(const SimState& s, bool with_cylinder) {
  MuRates r;
  const double u0 = origin_value(s);
  r.origin = kPi * u0 * u0;
  if (with_cylinder) {
    const auto radii = mu_radii(s.grid);
    const ProblemSpec pr = s.problem;
    for (int q = 0; q < 3; ++q)
      r.cylinder[q] = -integrate_sphere(s, radii[q], [&](const CellData& c) {
        return cylinder_density(c, pr, EnergySide::Inward);
      });
  }
  return r;
}

MuEstimate mu_from_rates(const std::vector<double>& t, const std::vector<MuRates>& rates,
                         const std::array<double, 3>& radii, MuMethod method) {
  if (t.size() != rates.size() || t.empty()) throw DomainError("mu_from_rates: size mismatch");
  const std::size_t n = t.size();
  const bool want_origin = method != MuMethod::CylinderExtrapolation;
  const bool want_cyl = method != MuMethod::OriginOracle;
  MuEstimate m;
  m.t = t;
  m.radii = radii;
  std::vector<double> f0(n);
  std::array<std::vector<double>, 3> fc;
  for (auto& v : fc) v.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    f0[k] = rates[k].origin;
    for (int q = 0; q < 3; ++q) fc[q][k] = rates[k].cylinder[q];
  }
  m.P_origin = quad::cumulative_trapezoid(m.t, f0);
  if (!want_origin) m.P_origin.assign(n, 0.0);
  if (want_cyl) {
    std::array<std::vector<double>, 3> C;
    for (int q = 0; q < 3; ++q) C[q] = quad::cumulative_trapezoid(m.t, fc[q]);
    // first-order extrapolation to radius 0 from the two smallest radii
    m.P_cylinder.resize(n);
    for (std::size_t k = 0; k < n; ++k) m.P_cylinder[k] = 2.0 * C[0][k] - C[1][k];
    const double coarse = 2.0 * C[1].back() - C[2].back();
    m.cylinder_error = std::fabs(m.P_cylinder.back() - coarse);
    if (want_origin) {
      const double ref = m.P_origin.back();
      const double diff = std::fabs(m.P_cylinder.back() - ref);
      m.discrepancy = ref > 0.0 ? diff / ref : diff;
      m.flagged = m.discrepancy > 0.05;
    }
  }
  return m;
}

MuEstimate estimate_mu(const SpacetimeTrace& tr, double t1, double t2, MuMethod method) {
  check_window(tr, t1, t2);
  const std::vector<double> t = tr.sample_times(t1, t2);
  std::vector<MuRates> rates(t.size());
  const bool want_cyl = method != MuMethod::OriginOracle;
  for (std::size_t k = 0; k < t.size(); ++k)
    at_time(tr, t[k], [&](const SimState& s) {
      rates[k] = mu_rates(s, want_cyl);
      return 0.0;
    });
  return mu_from_rates(t, rates, mu_radii(tr.grid()), method);
}

double segment_value(const SpacetimeTrace& tr, const Segment& seg, EnergySide which, bool* tip_truncated) {
  const bool inward = which == EnergySide::Inward;
  switch (seg.type) {
    case SegmentType::TimeSliceUp:
    case SegmentType::TimeSliceDown: {
      const double sign = seg.type == SegmentType::TimeSliceUp ? 1.0 : -1.0;
      const double v = at_time(tr, seg.a.t, [&](const SimState& s) {
        const Energies e = energies(s, seg.r_lo(), seg.r_hi());
        return inward ? e.E_minus : e.E_plus;
      });
      return sign * v;
    }
    case SegmentType::CylinderOutward:
    case SegmentType::CylinderInward:
      return cylinder_flux(tr, seg.a.r, seg.t_lo(), seg.t_hi(), which,
                           seg.type == SegmentType::CylinderOutward);
    case SegmentType::BackwardConeUp:
    case SegmentType::BackwardConeDown: {
      const double s = seg.a.r + seg.a.t;
      const ConeFlux q = cone_flux(tr, inward ? ConeKind::QmMinus : ConeKind::QpMinus, s, seg.t_lo(), seg.t_hi());
      if (tip_truncated) *tip_truncated = *tip_truncated || q.tip_truncated;
      return seg.type == SegmentType::BackwardConeUp ? q.value : -q.value;
    }
    case SegmentType::ForwardConeUp:
    case SegmentType::ForwardConeDown: {
      const double tau = seg.a.t - seg.a.r;
      const ConeFlux q = cone_flux(tr, inward ? ConeKind::QmPlus : ConeKind::QpPlus, tau, seg.t_lo(), seg.t_hi());
      if (tip_truncated) *tip_truncated = *tip_truncated || q.tip_truncated;
      return seg.type == SegmentType::ForwardConeUp ? q.value : -q.value;
    }
    case SegmentType::TAxis:
      return 0.0;
  }
  return 0.0;
}

namespace {

std::string integrand_name(SegmentType t, EnergySide w) {
  const bool in = w == EnergySide::Inward;
  switch (t) {
    case SegmentType::TimeSliceUp:
    case SegmentType::TimeSliceDown:
      return in ? "inward_density" : "outward_density";
    case SegmentType::CylinderOutward:
    case SegmentType::CylinderInward:
      return in ? "cylinder_inward_energy" : "cylinder_outward_energy";
    case SegmentType::BackwardConeUp:
    case SegmentType::BackwardConeDown:
      return in ? "potential_plus_angular" : "half_Lminus_sq";
    case SegmentType::ForwardConeUp:
    case SegmentType::ForwardConeDown:
      return in ? "half_Lplus_sq" : "potential_plus_angular";
    case SegmentType::TAxis:
      return "axis_measure";
  }
  return "?";
}

}  // namespace

FluxLedger flux_balance(const SpacetimeTrace& tr, const RegionSpec& region, EnergySide which,
                        const std::string& region_id) {
  FluxLedger L;
  L.region_id = region_id;
  L.which = which;
  L.region = region;
  L.h = tr.grid().h();
  L.dt_store = tr.spacing();
  L.tip_radius = 2.0 * L.h;
  const bool inward = which == EnergySide::Inward;
  double sum = 0.0;
  int id = 0;
  for (const auto& seg : region.segments) {
    LedgerEntry e;
    e.segment_id = id++;
    e.type = seg.type;
    e.integrand = integrand_name(seg.type, which);
    if (seg.type == SegmentType::TAxis) {
      const double pm = pi_mu(tr, seg.t_lo(), seg.t_hi());
      L.mu_term += inward ? pm : -pm;
    } else {
      e.value = segment_value(tr, seg, which, &L.tip_truncated);
    }
    sum += e.value;
    L.entries.push_back(e);
  }
  L.morawetz = morawetz_integral(tr, region);
  L.morawetz_term = inward ? -L.morawetz : L.morawetz;
  L.residual = sum + L.mu_term - L.morawetz_term;
  return L;
}

EnergyClosure full_energy_closure(const SpacetimeTrace& tr, const RegionSpec& region) {
  EnergyClosure out;
  const FluxLedger in = flux_balance(tr, region, EnergySide::Inward);
  const FluxLedger ou = flux_balance(tr, region, EnergySide::Outward);
  out.in_plus_out = in.residual + ou.residual;
  const ProblemSpec pr = tr.problem();
  double classical = 0.0;
  for (const auto& seg : region.segments) {
    switch (seg.type) {
      case SegmentType::TimeSliceUp:
      case SegmentType::TimeSliceDown: {
        const double v = at_time(tr, seg.a.t, [&](const SimState& s) { return energies(s, seg.r_lo(), seg.r_hi()).E; });
        classical += seg.type == SegmentType::TimeSliceUp ? v : -v;
        break;
      }
      case SegmentType::CylinderOutward:
      case SegmentType::CylinderInward: {
        const double v = time_integral(tr, seg.t_lo(), seg.t_hi(), [&](const SimState& s, double) {
          return integrate_sphere(s, seg.a.r, [](const CellData& c) { return -c.ut * c.ur; });
        });
        classical += seg.type == SegmentType::CylinderOutward ? v : -v;
        break;
      }
      case SegmentType::BackwardConeUp:
      case SegmentType::BackwardConeDown:
      case SegmentType::ForwardConeUp:
      case SegmentType::ForwardConeDown: {
        const bool bw = seg.type == SegmentType::BackwardConeUp || seg.type == SegmentType::BackwardConeDown;
        const double apex = bw ? seg.a.r + seg.a.t : seg.a.t - seg.a.r;
        const double v = time_integral(tr, seg.t_lo(), seg.t_hi(), [&](const SimState& s, double t) {
          const double R = bw ? apex - t : t - apex;
          if (R <= 0.0) return 0.0;
          return integrate_sphere(s, R, [&](const CellData& c) {
            const double d = bw ? c.ur - c.ut : c.ur + c.ut;
            return 0.5 * d * d + 0.5 * c.uang2 + pr.potential(c.u);
          });
        });
        const bool up = seg.type == SegmentType::BackwardConeUp || seg.type == SegmentType::ForwardConeUp;
        classical += up ? v : -v;
        break;
      }
      case SegmentType::TAxis:
        break;
    }
  }
  out.classical = classical;
  out.scale = at_time(tr, region.t_min(), [](const SimState& s) { return energies(s).E; });
  return out;
}

}  // namespace conewave
