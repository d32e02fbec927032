#include "conewave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "conewave/errors.hpp"
#include "conewave/geometry.hpp"
#include "conewave/interpolate.hpp"
#include "conewave/quadrature.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ∫_{t1}^{t2} ∫_{ℝ³} f dx dt over stored times (trapezoid), whole grid.
template <class F>
double spacetime_integral(const SpacetimeTrace& tr, double t1, double t2, F&& f) {
  if (t2 <= t1) return 0.0;
  const auto ts = tr.sample_times(t1, t2);
  const Interval all{0.0, kInf};
  std::vector<double> vals(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    auto eval = [&](const SimState& s) {
      return integrate_shells(s, std::span<const Interval>(&all, 1), [&](const CellData& c) { return f(c, t); });
    };
    const auto br = tr.locate(t);
    vals[k] = br.w == 0.0 ? eval(tr[br.j]) : (br.w == 1.0 ? eval(tr[br.j + 1]) : eval(tr.state_at(t)));
  }
  return quad::trapezoid(ts, vals);
}

// π∫ a(t)|u(0,t)|² dt over [t1, t2].
template <class A>
double weighted_mu(const SpacetimeTrace& tr, double t1, double t2, A&& a) {
  if (t2 <= t1) return 0.0;
  const auto ts = tr.sample_times(t1, t2);
  std::vector<double> vals(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto br = tr.locate(ts[k]);
    const double u0 = br.w == 0.0 ? origin_value(tr[br.j]) : origin_value(tr.state_at(ts[k]));
    vals[k] = a(ts[k]) * u0 * u0;
  }
  return kPi * quad::trapezoid(ts, vals);
}

double grid_extent(const Grid& g) { return g.radial() ? g.R_max : std::hypot(g.P_max, g.Z_max); }

struct LinFit {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0, rms = 0.0;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LinFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (f.intercept + f.slope * x[k]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  f.stderr_slope = (x.size() > 2 && sxx > 0.0) ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return f;
}

double subrange_integral(const std::vector<double>& t, const std::vector<double>& f, double a, double b) {
  if (t.empty() || b <= a) return 0.0;
  auto value_at = [&](double x) {
    if (x <= t.front()) return f.front();
    if (x >= t.back()) return f.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (x - t[j]) / (t[j + 1] - t[j]);
    return (1.0 - w) * f[j] + w * f[j + 1];
  };
  a = std::max(a, t.front());
  b = std::min(b, t.back());
  if (b <= a) return 0.0;
  std::vector<double> ts{a}, fs{value_at(a)};
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k] > a && t[k] < b) {
      ts.push_back(t[k]);
      fs.push_back(f[k]);
    }
  ts.push_back(b);
  fs.push_back(value_at(b));
  return quad::trapezoid(ts, fs);
}

}  // namespace

BoundCheck make_check(std::string name, double lhs, double rhs, std::string provenance, double tol) {
  BoundCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.tol = tol;
  c.pass = std::isfinite(lhs) && std::isfinite(rhs) && c.margin >= -tol * std::fabs(rhs);
  c.provenance = std::move(provenance);
  return c;
}

EnergySeries energy_series(const SpacetimeTrace& tr) {
  EnergySeries s;
  for (const auto& st : tr.states()) {
    const Energies e = energies(st);
    s.t.push_back(st.t);
    s.E.push_back(e.E);
    s.E_minus.push_back(e.E_minus);
    s.E_plus.push_back(e.E_plus);
  }
  return s;
}

BoundCheck morawetz_bound_check(const SpacetimeTrace& tr, double R, double E, double t1, double t2) {
  if (!(R > 0.0) || R > tr.grid().reach()) throw DomainError("Morawetz radius outside the grid");
  const ProblemSpec pr = tr.problem();
  if (std::isnan(t1)) t1 = std::max(0.0, tr.t_first());
  if (std::isnan(t2)) t2 = tr.t_last();
  if (!(t1 < t2)) throw DomainError("empty Morawetz window");
  const double p = pr.p;
  const double volume = spacetime_integral(tr, t1, t2, [&](const CellData& c, double) {
    const double pot = pr.potential(c.u);
    if (c.r < R) return Density{(0.5 * c.grad2 + 0.5 * c.ut * c.ut + (p - 2.0) * pot) / R, 0.0};
    return Density{((p - 1.0) * pot + c.uang2) / c.r, 0.0};
  });
  // cells straddling |x| = R are assigned by center; the split is refined away with h
  const auto ts = tr.sample_times(t1, t2);
  std::vector<double> sph(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto br = tr.locate(ts[k]);
    sph[k] = br.w == 0.0 ? sphere_u2(tr[br.j], R) : sphere_u2(tr.state_at(ts[k]), R);
  }
  const double lhs = volume + quad::trapezoid(ts, sph) / (2.0 * R * R);
  return make_check("morawetz_R=" + std::to_string(R), lhs, 2.0 * E, "global Morawetz inequality (<= 2E)");
}

BoundCheck weighted_morawetz_check(const SpacetimeTrace& tr, double kappa, double gamma, double K1) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in (0, 1)");
  if (!(gamma >= kappa && gamma < 1.0)) throw DomainError("gamma must satisfy kappa <= gamma < 1");
  const ProblemSpec pr = tr.problem();
  const double t1 = std::max(0.0, tr.t_first()), t2 = tr.t_last();
  const double c_pot = (pr.p - 1.0 - 2.0 * gamma) / 2.0;
  const double c_ang = (1.0 - gamma) / 2.0;
  const double mu_part = weighted_mu(tr, t1, t2, [&](double t) { return std::pow(t, kappa); });
  const double st = spacetime_integral(tr, t1, t2, [&](const CellData& c, double t) {
    return Density{std::pow(c.r + t, kappa) * (c_pot * pr.potential(c.u) + c_ang * c.uang2) / c.r, 0.0};
  });
  return make_check("weighted_morawetz_kappa=" + std::to_string(kappa), mu_part + st, K1,
                    "weighted Morawetz, a(r) = r^kappa (<= K1)");
}

BoundCheck weighted_morawetz_p3(const SpacetimeTrace& tr, double K1) {
  const ProblemSpec pr = tr.problem();
  if (pr.p != 3.0) throw DomainError("the gamma = 1 variant needs p = 3");
  const double t1 = std::max(0.0, tr.t_first()), t2 = tr.t_last();
  const double mu_part = weighted_mu(tr, t1, t2, [](double t) { return t; });
  const double st = spacetime_integral(tr, t1, t2, [&](const CellData& c, double t) {
    return Density{t / c.r * (pr.potential(c.u) + 0.5 * c.uang2), 0.0};
  });
  return make_check("weighted_morawetz_p3", mu_part + st, K1, "weighted Morawetz, p = 3, a(r) = r (<= K1)");
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& Em, double T0, double T1,
                   double kappa, double K) {
  if (t.size() != Em.size()) throw DomainError("decay fit: series lengths differ");
  DecayFit f;
  f.T0 = std::max(T0, 1.0);
  f.T1 = T1;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < f.T0 || t[k] > T1) continue;
    if (!(Em[k] > 0.0)) {
      ++f.skipped;
      continue;
    }
    x.push_back(std::log(t[k]));
    y.push_back(std::log(Em[k]));
    f.sup_weighted = std::max(f.sup_weighted, std::pow(t[k], kappa) * Em[k]);
  }
  f.samples = static_cast<int>(x.size());
  if (f.samples < 10) throw DomainError("decay fit needs at least 10 positive samples in the window");
  const LinFit lf = least_squares(x, y);
  f.alpha = -lf.slope;
  f.C = std::exp(lf.intercept);
  f.residual = lf.rms;
  f.C_fit = K > 0.0 ? f.sup_weighted / K : 0.0;
  return f;
}

BoundCheck decay_surrogate_check(const std::vector<double>& t, const std::vector<double>& Em, double kappa,
                                 double T0, const std::vector<double>& window_ends) {
  if (window_ends.empty()) throw DomainError("decay surrogate needs at least one window");
  auto sup_on = [&](double T1) {
    double s = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k] >= T0 && t[k] <= T1) s = std::max(s, std::pow(t[k], kappa) * Em[k]);
    return s;
  };
  const double first = sup_on(window_ends.front());
  double worst = first;
  for (double T1 : window_ends) worst = std::max(worst, sup_on(T1));
  return make_check("decay_sup_t^kappa_E_minus", worst, first, "decay estimate E_-(t) <~ K t^-kappa");
}

InnerConeSeries inner_cone_energy(const SpacetimeTrace& tr, double c) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("inner-cone constant must lie in (0, 1)");
  InnerConeSeries s;
  s.c = c;
  const double rmin = 4.0 * tr.grid().h();
  const double extent = grid_extent(tr.grid());
  for (const auto& st : tr.states()) {
    const double R = c * st.t;  // forward times only
    if (R < rmin || R > extent) continue;
    const Energies e = energies(st, 0.0, R);
    s.t.push_back(st.t);
    s.E_minus.push_back(e.E_minus);
    s.E_plus.push_back(e.E_plus);
  }
  summarize_inner_cone(s);
  return s;
}

void summarize_inner_cone(InnerConeSeries& s) {
  const std::size_t n = s.t.size();
  s.conclusive = n >= 8;
  if (n >= 4) {
    const std::size_t q = n / 4;
    double a = 0.0, b = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
      a += s.E_minus[k];
      b += s.E_minus[n - q + k];
    }
    s.first_quarter_mean = a / static_cast<double>(q);
    s.last_quarter_mean = b / static_cast<double>(q);
    s.decreasing = s.last_quarter_mean <= 0.5 * s.first_quarter_mean;
  }
}

double ScatteringNorms::q_increment(double a, double b) const {
  std::vector<double> f(Lp1.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::pow(Lp1[k], q);
  return subrange_integral(t, f, a, b);
}

double ScatteringNorms::st_increment(double a, double b) const { return subrange_integral(t, st_rate, a, b); }

ScatteringNorms scattering_norms(const SpacetimeTrace& tr, double q, double kappa) {
  if (!(q >= 1.0)) throw DomainError("time exponent q must be >= 1");
  const ProblemSpec pr = tr.problem();
  ScatteringNorms n;
  n.q = q;
  n.q_in_regime = kappa > 0.0 ? q > (pr.p + 1.0) / kappa : true;
  const Interval all{0.0, kInf};
  const double e1 = pr.p + 1.0, e2 = 2.0 * (pr.p - 1.0);
  for (const auto& st : tr.states()) {
    const double a = integrate_shells(st, std::span<const Interval>(&all, 1), [&](const CellData& c) {
      return Density{ProblemSpec::abs_pow(c.u, e1), 0.0};
    });
    const double b = integrate_shells(st, std::span<const Interval>(&all, 1), [&](const CellData& c) {
      return Density{ProblemSpec::abs_pow(c.u, e2), 0.0};
    });
    n.t.push_back(st.t);
    n.Lp1.push_back(std::pow(a, 1.0 / e1));
    n.st_rate.push_back(b);
  }
  if (n.t.size() >= 2) {
    n.LqLp1 = std::pow(n.q_increment(n.t.front(), n.t.back()), 1.0 / q);
    n.Lst = std::pow(n.st_increment(n.t.front(), n.t.back()), 1.0 / e2);
  }
  return n;
}

BoundCheck lift_of_r_check(const SpacetimeTrace& tr, double t0, double r1, double r2, int n_r) {
  if (!(r2 > r1 && r1 > 0.0) || n_r < 3) throw DomainError("lift-of-r needs 0 < r1 < r2 and n_r >= 3");
  std::vector<double> rs(n_r), qs(n_r);
  for (int k = 0; k < n_r; ++k) {
    rs[k] = r1 + (r2 - r1) * k / (n_r - 1);
    qs[k] = cone_flux(tr, ConeKind::QmMinus, t0 + rs[k], t0, t0 + rs[k]).value;
  }
  const double lhs = quad::trapezoid(rs, qs);
  const double rhs = r2 * morawetz_integral(tr, cone_shell_region(t0, r1, r2));
  return make_check("lift_of_r", lhs, rhs, "cone-shell lift of r", 0.02);
}

BoundCheck flux_decay_trend(const SpacetimeTrace& tr, int n_s) {
  if (n_s < 3) throw DomainError("flux trend needs at least 3 cone parameters");
  const double t1 = tr.t_first();
  const double s_max = std::min(tr.t_last(), t1 + tr.grid().reach());
  const double s_min = t1 + 0.5 * (s_max - t1);
  std::vector<double> s(n_s), q(n_s);
  for (int k = 0; k < n_s; ++k) {
    s[k] = s_min + (s_max - s_min) * k / (n_s - 1);
    q[k] = cone_flux(tr, ConeKind::QmMinus, s[k], t1, s[k]).value;
  }
  const LinFit lf = least_squares(s, q);
  // nonincreasing within noise: slope ≤ 2·stderr
  return make_check("flux_Q_minus_backward_trend", lf.slope, 2.0 * lf.stderr_slope,
                    "backward-cone inward flux tends to 0", 0.0);
}

std::vector<BoundCheck> measure_and_flux_bounds(const SpacetimeTrace& tr, const FluxBoundsConfig& cfg) {
  std::vector<BoundCheck> out;
  const double E = cfg.E;
  const double t1 = tr.t_first(), t2 = tr.t_last();
  const double reach = tr.grid().reach();

  const double pm = pi_mu(tr, t1, t2);
  out.push_back(make_check("pi_mu_window_le_E", pm, E, "pi mu(R) <= E"));

  const int n = std::max(1, cfg.n_cones);
  const double span = std::min(t2 - t1, reach);
  double q_max = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double r = span * k / n;
    const double s = t1 + r;  // backward cones from the first slice
    const double qm = cone_flux(tr, ConeKind::QmMinus, s, t1, s).value;
    const double qp = cone_flux(tr, ConeKind::QpMinus, s, t1, s).value;
    const double tau = t2 - r;  // forward cones up to the last slice
    const double fm = cone_flux(tr, ConeKind::QmPlus, tau, tau, t2).value;
    const double fp = cone_flux(tr, ConeKind::QpPlus, tau, tau, t2).value;
    q_max = std::max({q_max, qm + qp, fm + fp});
  }
  out.push_back(make_check("max_cone_flux_le_E", q_max, E, "cone fluxes dominated by E"));

  // E₋(t₀) = πμ([t₀,T]) + 𝓜(ℝ³×[t₀,T]) + E₋(T)
  const std::vector<double> starts = t1 < 0.0 && t2 > 0.0 ? std::vector<double>{t1, 0.0} : std::vector<double>{t1};
  for (double t0 : starts) {
    const RegionSpec slab = slab_region(t0, t2, reach);
    const FluxLedger L = flux_balance(tr, slab, EnergySide::Inward, "slab");
    out.push_back(make_check("slab_identity_t0=" + std::to_string(t0), std::fabs(L.residual), 0.01 * E,
                             "inward energy as measure plus Morawetz integral", 0.0));
    if (t0 == t1 && t1 < 0.0) {
      // full window: πμ + 𝓜 + E₋(T) = E
      const double em_T = energies(tr[tr.size() - 1]).E_minus;
      const double total = L.mu_term + L.morawetz + em_T;
      out.push_back(make_check("full_window_identity", std::fabs(total - E), 0.01 * E,
                               "pi mu + M + E_-(T) = E on the full window", 0.0));
    }
  }

  if (cfg.lift_r2 > 0.0 || t2 - cfg.lift_t0 > cfg.lift_r1) {
    const double r2 = cfg.lift_r2 > 0.0 ? cfg.lift_r2 : std::min(t2 - cfg.lift_t0, reach);
    if (tr.contains(cfg.lift_t0) && r2 > cfg.lift_r1) out.push_back(lift_of_r_check(tr, cfg.lift_t0, cfg.lift_r1, r2));
  }
  out.push_back(flux_decay_trend(tr));
  return out;
}

}  // namespace conewave
