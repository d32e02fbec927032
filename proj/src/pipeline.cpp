#include "conewave/pipeline.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "conewave/errors.hpp"
#include "conewave/flux.hpp"
#include "conewave/geometry.hpp"
#include "conewave/parallel.hpp"
#include "conewave/quadrature.hpp"
#include "conewave/solver.hpp"

namespace conewave {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

ordered_json jnum(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeAbort("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeAbort("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Per stored state, collected by the solver observer so streaming runs see them too.
struct Sample {
  double t = 0.0;
  Energies e;
  double E_inner = kNaN;
  double lp1_pow = 0.0;  // ∫|u|^(p+1)
  double st_rate = 0.0;  // ∫|u|^(2(p-1))
  MuRates mu;
};

Sample sample_state(const SimState& s, const RunConfig& cfg) {
  Sample out;
  out.t = s.t;
  out.e = energies(s);
  const double R = cfg.diag.inner_c * s.t;
  if (s.t > 0.0 && R >= 4.0 * s.grid.h() && R <= s.grid.reach()) out.E_inner = energies(s, 0.0, R).E_minus;
  const Interval all{0.0, std::numeric_limits<double>::infinity()};
  const std::span<const Interval> shells(&all, 1);
  const double e1 = s.problem.p + 1.0, e2 = 2.0 * (s.problem.p - 1.0);
  out.lp1_pow = integrate_shells(s, shells, [&](const CellData& c) { return Density{ProblemSpec::abs_pow(c.u, e1), 0.0}; });
  out.st_rate = integrate_shells(s, shells, [&](const CellData& c) { return Density{ProblemSpec::abs_pow(c.u, e2), 0.0}; });
  if (cfg.diag.mu) out.mu = mu_rates(s, true);
  return out;
}

ordered_json to_json(const BoundCheck& c) {
  return {{"name", c.name}, {"lhs", jnum(c.lhs)},   {"rhs", jnum(c.rhs)},          {"margin", jnum(c.margin)},
          {"tol", c.tol},   {"pass", c.pass},       {"provenance", c.provenance}};
}

ordered_json to_json(const FluxLedger& L) {
  ordered_json v = ordered_json::array();
  for (const auto& p : L.region.vertices) v.push_back({{"r", p.r}, {"t", p.t}});
  ordered_json seg = ordered_json::array();
  for (const auto& e : L.entries)
    seg.push_back({{"segment_id", e.segment_id}, {"type", to_string(e.type)}, {"integrand", e.integrand},
                   {"value", jnum(e.value)}});
  return {{"region_id", L.region_id},
          {"side", to_string(L.which)},
          {"vertices", v},
          {"segments", seg},
          {"mu_term", jnum(L.mu_term)},
          {"morawetz", jnum(L.morawetz)},
          {"morawetz_term", jnum(L.morawetz_term)},
          {"residual", jnum(L.residual)},
          {"h", L.h},
          {"dt_store", L.dt_store},
          {"tip_radius", L.tip_radius},
          {"tip_truncated", L.tip_truncated}};
}

std::string ledgers_csv(const std::vector<FluxLedger>& ledgers) {
  std::string out = "region_id,segment_id,type,value,mu_term,morawetz_term,residual\n";
  for (const auto& L : ledgers) {
    const std::string id = L.region_id + "/" + to_string(L.which);
    for (const auto& e : L.entries)
      out += id + "," + std::to_string(e.segment_id) + "," + to_string(e.type) + "," + num(e.value) + "," +
             num(L.mu_term) + "," + num(L.morawetz_term) + "," + num(L.residual) + "\n";
  }
  return out;
}

double observed_order(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return kNaN;
  return std::log2(coarse / fine);
}

ordered_json config_json(const RunConfig& c, const Grid& g, double dt, double support) {
  ordered_json grid = {{"backend", to_string(c.backend)}, {"h", g.h()}};
  if (g.radial()) {
    grid["n_r"] = g.n_r;
    grid["R_max"] = g.R_max;
  } else {
    grid["n_rho"] = g.n_rho;
    grid["n_z"] = g.n_z;
    grid["P_max"] = g.P_max;
    grid["Z_max"] = g.Z_max;
  }
  return {{"problem", {{"p", c.problem.p}, {"coupling", c.problem.coupling}}},
          {"data",
           {{"family", c.family},
            {"amplitude", c.amplitude},
            {"sigma", c.sigma},
            {"z0", c.z0},
            {"cutoff_radius", c.cutoff_radius},
            {"support_radius", support}}},
          {"grid", grid},
          {"run",
           {{"T_end", c.solver.T_end},
            {"t_start", c.solver.t_start},
            {"cfl", c.solver.cfl},
            {"dt", dt},
            {"store_stride", c.solver.store_stride > 0 ? c.solver.store_stride : (g.radial() ? 1 : 4)},
            {"kappa", c.kappa},
            {"seed", c.seed},
            {"streaming", c.diag.streaming}}}};
}

}  // namespace

bool RunOutcome::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

bool LadderOutcome::all_pass() const {
  return std::all_of(levels.begin(), levels.end(), [](const RunOutcome& r) { return r.all_pass(); });
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw RuntimeAbort("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

std::size_t estimate_run_memory(const RunConfig& cfg) {
  const InitialData data = cfg.data();
  const Grid g = cfg.grid(data);
  const double dt = max_time_step(g, cfg.solver.cfl);
  const int stride = cfg.solver.store_stride > 0 ? cfg.solver.store_stride : (g.radial() ? 1 : 4);
  const double block = stride * dt;
  const double fwd = std::ceil(cfg.solver.T_end / block) + 1.0;
  const double bwd = std::ceil(-cfg.solver.t_start / block);
  // backward states are buffered even when streaming
  const double states = cfg.diag.streaming ? bwd + 3.0 : fwd + bwd + 1.0;
  const double cells = static_cast<double>(g.size());
  // two fields per state; stepper arrays and one cell_data pass (7 doubles per cell) on top
  const double bytes = states * cells * 16.0 + cells * (8.0 * 8.0 + 7.0 * 8.0);
  return static_cast<std::size_t>(bytes);
}

std::size_t memory_budget() {
  if (const char* env = std::getenv("CONEWAVE_MEMORY_MB")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v) << 20;
    } catch (...) {
    }
  }
  const long pages = sysconf(_SC_PHYS_PAGES), page = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(0.8 * static_cast<double>(pages) * static_cast<double>(page));
}

namespace {

void preflight(std::size_t need) {
  const std::size_t budget = memory_budget();
  if (need > budget)
    throw ConfigError("insufficient memory: run needs about " + std::to_string(need >> 20) + " MiB, budget is " +
                      std::to_string(budget >> 20) +
                      " MiB (set diagnostics.streaming, a coarser grid, or a larger store_stride)");
}

RunOutcome run_unchecked(const RunConfig& cfg, const fs::path& out_dir) {
  const InitialData data = cfg.data();
  const Grid grid = cfg.grid(data);
  const ProblemSpec& pr = cfg.problem;
  const auto& d = cfg.diag;

  std::vector<Sample> samples;
  double E = kNaN;
  auto observer = [&](const SimState& s) {
    samples.push_back(sample_state(s, cfg));
    if (s.t == 0.0) E = samples.back().e.E;
  };
  EvolveResult ev = evolve(data, pr, grid, cfg.solver, observer);
  const SpacetimeTrace& tr = ev.trace;

  RunOutcome out;
  out.dir = out_dir;
  out.E = E;
  auto& m = out.metrics;
  m.h = grid.h();
  m.dt = ev.energy.dt;
  m.energy_drift = ev.energy.max_rel_drift;
  m.cone_residual = kNaN;
  m.mu_discrepancy = kNaN;
  auto& checks = out.checks;
  auto skip = [&](const std::string& what, const std::exception& e) { out.skipped.push_back(what + ": " + e.what()); };
  const double Escale = E > 0.0 ? E : 1.0;

  // energy series checks
  double quad_drift = 0.0, decomp = 0.0, em_up = 0.0, ep_down = 0.0, lp1_max = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Energies& e = samples[k].e;
    quad_drift = std::max(quad_drift, std::fabs(e.E - E) / Escale);
    decomp = std::max(decomp, std::fabs(e.E_minus + e.E_plus - e.E) / Escale);
    lp1_max = std::max(lp1_max, samples[k].lp1_pow);
    if (k > 0) {
      em_up = std::max(em_up, e.E_minus - samples[k - 1].e.E_minus);
      ep_down = std::max(ep_down, samples[k - 1].e.E_plus - e.E_plus);
    }
  }
  m.quadrature_drift = quad_drift;
  m.decomposition_error = decomp;
  checks.push_back(make_check("energy_drift", m.energy_drift, d.drift_tol, "conserved energy (relative drift)", 0.0));
  checks.push_back(make_check("energy_decomposition", decomp, d.decomposition_tol, "E_+ + E_- = E at stored times", 0.0));
  checks.push_back(make_check("E_minus_nonincreasing", em_up, d.mono_tol * Escale, "E_- decreasing in t", 0.0));
  checks.push_back(make_check("E_plus_nondecreasing", ep_down, d.mono_tol * Escale, "E_+ increasing in t", 0.0));
  checks.push_back(make_check("Lp1_bounded_by_energy", lp1_max, (pr.p + 1.0) * E, "potential term of E"));

  // ledgers
  std::vector<FluxLedger> ledgers;
  if (!d.streaming && d.ledgers) {
    double worst = 0.0;
    bool any = false;
    for (double t0 : d.cone_t0)
      for (double r0 : d.cone_r0) {
        const std::string id = "cone_t0=" + short_num(t0) + "_r0=" + short_num(r0);
        try {
          if (t0 < tr.t_first() || t0 + r0 > tr.t_last()) throw DomainError("cone leaves the simulated window");
          const RegionSpec region = cone_region(t0, r0);
          const Energies base = energies(tr.state_at(t0), 0.0, r0);
          for (EnergySide side : {EnergySide::Inward, EnergySide::Outward}) {
            FluxLedger L = flux_balance(tr, region, side, id);
            // outward side is scaled by the full base energy: E₊ on the base can be tiny
            const double scale = side == EnergySide::Inward ? base.E_minus : base.E;
            const double rel = scale > 0.0 ? std::fabs(L.residual) / scale : std::fabs(L.residual);
            m.ledger_residuals.emplace_back(id + "/" + to_string(side), rel);
            worst = std::max(worst, rel);
            any = true;
            checks.push_back(make_check("cone_law[" + id + "/" + to_string(side) + "]", std::fabs(L.residual),
                                        0.01 * scale, "cone-region energy balance", 0.0));
            ledgers.push_back(std::move(L));
          }
        } catch (const DomainError& e) {
          skip("ledger " + id, e);
        }
      }
    if (any) m.cone_residual = worst;
  }
  if (!d.streaming && d.slab) {
    try {
      const double t1 = std::max(0.0, tr.t_first()), t2 = tr.t_last();
      if (!(t2 > t1)) throw DomainError("empty forward window");
      FluxLedger L = flux_balance(tr, slab_region(t1, t2, grid.reach()), EnergySide::Inward, "slab");
      checks.push_back(make_check("slab_balance", std::fabs(L.residual), 0.01 * Escale,
                                  "E_-(t2) - E_-(t1) = -pi mu - M on a slab", 0.0));
      m.ledger_residuals.emplace_back("slab/inward", std::fabs(L.residual) / Escale);
      ledgers.push_back(std::move(L));
    } catch (const DomainError& e) {
      skip("slab ledger", e);
    }
  }

  // μ from the per-state rates
  MuEstimate mu;
  std::vector<double> ts(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) ts[k] = samples[k].t;
  if (d.mu && samples.size() >= 2) {
    std::vector<MuRates> rates(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) rates[k] = samples[k].mu;
    mu = mu_from_rates(ts, rates, mu_radii(grid));
    m.mu_discrepancy = mu.discrepancy;
    double drop = 0.0;
    for (std::size_t k = 1; k < mu.P_origin.size(); ++k) drop = std::max(drop, mu.P_origin[k - 1] - mu.P_origin[k]);
    checks.push_back(make_check("mu_estimators_agree", mu.discrepancy, 0.05, "origin and cylinder estimators of mu", 0.0));
    checks.push_back(make_check("pi_mu_le_E", mu.total(), E, "pi mu(R) <= E"));
    checks.push_back(make_check("P_nondecreasing", drop, 0.0, "mu is a positive measure", 0.0));
  }

  // spacetime bounds
  if (!d.streaming) {
    for (double R : d.morawetz_R) {
      try {
        checks.push_back(morawetz_bound_check(tr, R, E));
        checks.back().tol = 0.0;
        checks.back().pass = checks.back().margin > 0.0;
      } catch (const DomainError& e) {
        skip("morawetz R=" + short_num(R), e);
      }
    }
  }
  WeightedEnergyReport wk, w1;
  const bool want_weighted = d.weighted || d.decay;
  if (want_weighted) {
    wk = weighted_energies(data, pr, cfg.kappa);
    if (pr.p == 3.0) w1 = weighted_energies(data, pr, 1.0);
  }
  if (!d.streaming && d.weighted) {
    try {
      checks.push_back(weighted_morawetz_check(tr, cfg.kappa, cfg.kappa, wk.K));
    } catch (const DomainError& e) {
      skip("weighted morawetz", e);
    }
    if (pr.p == 3.0) {
      try {
        checks.push_back(weighted_morawetz_p3(tr, w1.K));
      } catch (const DomainError& e) {
        skip("weighted morawetz p=3", e);
      }
    }
  }

  std::vector<double> tf, emf;
  for (const auto& s : samples)
    if (s.t > 0.0) {
      tf.push_back(s.t);
      emf.push_back(s.e.E_minus);
    }
  DecayFit fit;
  bool have_fit = false;
  if (d.decay) {
    const double T1 = cfg.solver.T_end;
    try {
      fit = decay_fit(tf, emf, d.decay_T0, T1, cfg.kappa, wk.K);
      have_fit = true;
    } catch (const DomainError& e) {
      skip("decay fit", e);
    }
    std::vector<double> ends;
    for (int k = 1; k <= 4; ++k)
      if (T1 * k / 4.0 > d.decay_T0) ends.push_back(T1 * k / 4.0);
    try {
      if (ends.size() < 2) throw DomainError("decay surrogate needs two windows beyond decay_T0");
      checks.push_back(decay_surrogate_check(tf, emf, cfg.kappa, d.decay_T0, ends));
    } catch (const DomainError& e) {
      skip("decay surrogate", e);
    }
  }

  InnerConeSeries inner;
  inner.c = d.inner_c;
  for (const auto& s : samples)
    if (!std::isnan(s.E_inner)) {
      inner.t.push_back(s.t);
      inner.E_minus.push_back(s.E_inner);
    }
  summarize_inner_cone(inner);
  if (inner.conclusive && cfg.solver.T_end >= 20.0)
    checks.push_back(make_check("inner_cone_decreasing", inner.last_quarter_mean, 0.5 * inner.first_quarter_mean,
                                "inner-cone energy decays", 0.0));
  else
    out.skipped.push_back("inner cone trend: window too short to be conclusive (needs T_end >= 20)");

  if (!d.streaming && d.flux_bounds) {
    try {
      FluxBoundsConfig fb;
      fb.E = E;
      fb.lift_t0 = std::max(0.0, tr.t_first());
      for (auto& c : measure_and_flux_bounds(tr, fb)) checks.push_back(c);
    } catch (const DomainError& e) {
      skip("flux bounds", e);
    }
  }

  // scattering norms from samples
  std::vector<double> lp1(samples.size()), st(samples.size()), st_inc(samples.size(), 0.0);
  const double e1 = pr.p + 1.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    lp1[k] = std::pow(samples[k].lp1_pow, 1.0 / e1);
    st[k] = samples[k].st_rate;
    if (k > 0) st_inc[k] = 0.5 * (ts[k] - ts[k - 1]) * (st[k] + st[k - 1]);
  }
  ScatteringNorms sn;
  sn.q = d.scattering_q;
  sn.q_in_regime = sn.q > (pr.p + 1.0) / cfg.kappa;
  sn.t = ts;
  sn.Lp1 = lp1;
  sn.st_rate = st;

  // artifacts
  fs::create_directories(out_dir);
  {
    std::string csv = "t,E,E_minus,E_plus,E_minus_inner_c\n";
    for (const auto& s : samples)
      csv += num(s.t) + "," + num(s.e.E) + "," + num(s.e.E_minus) + "," + num(s.e.E_plus) + "," + num(s.E_inner) + "\n";
    write_file(out_dir / "energy.csv", csv);
  }
  {
    std::string csv = "t,P_origin,P_cylinder\n";
    for (std::size_t k = 0; k < mu.t.size(); ++k)
      csv += num(mu.t[k]) + "," + num(mu.P_origin[k]) + "," + num(mu.P_cylinder.empty() ? kNaN : mu.P_cylinder[k]) + "\n";
    write_file(out_dir / "mu.csv", csv);
  }
  {
    std::string csv = "t,Lp1_norm,st_norm_increment\n";
    for (std::size_t k = 0; k < samples.size(); ++k) csv += num(ts[k]) + "," + num(lp1[k]) + "," + num(st_inc[k]) + "\n";
    write_file(out_dir / "norms.csv", csv);
  }
  {
    std::string csv = "t,E_staggered\n";
    for (std::size_t k = 0; k < ev.energy.t.size(); ++k) csv += num(ev.energy.t[k]) + "," + num(ev.energy.E[k]) + "\n";
    write_file(out_dir / "energy_staggered.csv", csv);
  }
  ordered_json lj = ordered_json::array();
  for (const auto& L : ledgers) lj.push_back(to_json(L));
  write_file(out_dir / "ledgers.json", lj.dump(2) + "\n");
  write_file(out_dir / "ledgers.csv", ledgers_csv(ledgers));

  const std::string cfg_hash = sha256_hex(cfg.source_text);
  ordered_json rep;
  rep["tool_version"] = kToolVersion;
  rep["config_sha256"] = cfg_hash;
  rep["config"] = config_json(cfg, grid, ev.energy.dt, data.support_radius);
  rep["energy"] = {{"E", jnum(E)},
                   {"staggered_drift", m.energy_drift},
                   {"quadrature_drift", m.quadrature_drift},
                   {"decomposition_error", m.decomposition_error}};
  if (want_weighted)
    rep["weighted_energy"] = {{"kappa", wk.kappa}, {"E_kappa", wk.E_kappa}, {"K", wk.K}, {"E_10", wk.E_10},
                              {"rel_error", wk.rel_error}, {"converged", wk.converged},
                              {"K_kappa_1", pr.p == 3.0 ? jnum(w1.K) : ordered_json(nullptr)}};
  if (d.mu && !mu.t.empty())
    rep["mu"] = {{"pi_mu_origin", mu.total()},
                 {"pi_mu_cylinder", mu.P_cylinder.empty() ? ordered_json(nullptr) : jnum(mu.P_cylinder.back())},
                 {"radii", mu.radii},
                 {"cylinder_error", mu.cylinder_error},
                 {"discrepancy", mu.discrepancy},
                 {"flagged", mu.flagged}};
  if (have_fit)
    rep["decay_fit"] = {{"T0", fit.T0},         {"T1", fit.T1},           {"alpha", fit.alpha},
                        {"C", fit.C},           {"residual", fit.residual}, {"samples", fit.samples},
                        {"skipped", fit.skipped}, {"kappa", cfg.kappa},    {"sup_weighted", fit.sup_weighted},
                        {"C_fit", jnum(fit.C_fit)}};
  rep["inner_cone"] = {{"c", inner.c},
                       {"samples", inner.t.size()},
                       {"first_quarter_mean", inner.first_quarter_mean},
                       {"last_quarter_mean", inner.last_quarter_mean},
                       {"conclusive", inner.conclusive},
                       {"decreasing", inner.decreasing}};
  if (samples.size() >= 2) {
    const double ta = ts.front(), tb = ts.back();
    const double mid = 0.5 * (ta + tb);
    rep["scattering"] = {{"q", sn.q},
                         {"q_in_regime", sn.q_in_regime},
                         {"LqLp1", std::pow(sn.q_increment(ta, tb), 1.0 / sn.q)},
                         {"Lst", std::pow(sn.st_increment(ta, tb), 1.0 / (2.0 * (pr.p - 1.0)))},
                         {"q_increment_first_half", sn.q_increment(ta, mid)},
                         {"q_increment_second_half", sn.q_increment(mid, tb)}};
  }
  ordered_json lr = ordered_json::object();
  for (const auto& [k, v] : m.ledger_residuals) lr[k] = v;
  rep["metrics"] = {{"h", m.h},
                    {"dt", m.dt},
                    {"energy_drift", m.energy_drift},
                    {"quadrature_drift", m.quadrature_drift},
                    {"decomposition_error", m.decomposition_error},
                    {"cone_residual", jnum(m.cone_residual)},
                    {"mu_discrepancy", jnum(m.mu_discrepancy)},
                    {"ledger_residuals", lr}};
  ordered_json cj = ordered_json::array();
  for (const auto& c : checks) cj.push_back(to_json(c));
  rep["checks"] = cj;
  rep["skipped"] = out.skipped;
  rep["all_pass"] = out.all_pass();
  write_file(out_dir / "report.json", rep.dump(2) + "\n");

  ordered_json man;
  man["tool_version"] = kToolVersion;
  man["config_sha256"] = cfg_hash;
  ordered_json files = ordered_json::array();
  for (const char* f : {"energy.csv", "energy_staggered.csv", "mu.csv", "norms.csv", "ledgers.json", "ledgers.csv",
                        "report.json"})
    files.push_back({{"name", f}, {"sha256", sha256_hex(read_file(out_dir / f))}});
  man["files"] = files;
  write_file(out_dir / "manifest.json", man.dump(2) + "\n");
  write_file(out_dir / "config.toml", cfg.source_text);
  return out;
}

}  // namespace

RunOutcome run_experiment(const RunConfig& cfg, const fs::path& out_dir) {
  preflight(estimate_run_memory(cfg));
  return run_unchecked(cfg, out_dir);
}

LadderOutcome run_ladder(const RunConfig& cfg, int levels, const fs::path& out_dir) {
  if (levels < 2) throw ConfigError("ladder needs at least 2 levels");
  if (levels > 8) throw ConfigError("ladder supports at most 8 levels");
  std::vector<RunConfig> cfgs;
  for (int k = 0; k < levels; ++k) cfgs.push_back(cfg.refined(k));
  // levels run concurrently when more than one worker is allowed
  const bool concurrent = thread_count() > 1;
  std::size_t need = 0;
  for (const auto& c : cfgs) {
    const std::size_t b = estimate_run_memory(c);
    need = concurrent ? need + b : std::max(need, b);
  }
  preflight(need);

  LadderOutcome out;
  out.levels.resize(levels);
  auto level_dir = [&](int k) { return out_dir / ("level_" + std::to_string(k)); };
  if (concurrent) {
    std::vector<std::exception_ptr> errs(levels);
    {
      std::vector<std::jthread> pool;
      for (int k = 0; k < levels; ++k)
        pool.emplace_back([&, k] {
          try {
            out.levels[k] = run_unchecked(cfgs[k], level_dir(k));
          } catch (...) {
            errs[k] = std::current_exception();
          }
        });
    }
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  } else {
    for (int k = 0; k < levels; ++k) out.levels[k] = run_unchecked(cfgs[k], level_dir(k));
  }

  auto add = [&](const std::string& name, auto get) {
    std::vector<double> o;
    for (int k = 0; k + 1 < levels; ++k) o.push_back(observed_order(get(out.levels[k]), get(out.levels[k + 1])));
    out.orders.emplace_back(name, o);
  };
  add("energy_drift", [](const RunOutcome& r) { return r.metrics.energy_drift; });
  add("quadrature_drift", [](const RunOutcome& r) { return r.metrics.quadrature_drift; });
  add("decomposition_error", [](const RunOutcome& r) { return r.metrics.decomposition_error; });
  add("cone_residual", [](const RunOutcome& r) { return r.metrics.cone_residual; });
  add("mu_discrepancy", [](const RunOutcome& r) { return r.metrics.mu_discrepancy; });
  for (std::size_t q = 0; q < out.levels[0].metrics.ledger_residuals.size(); ++q) {
    const std::string id = out.levels[0].metrics.ledger_residuals[q].first;
    add("residual[" + id + "]", [&](const RunOutcome& r) {
      for (const auto& [k, v] : r.metrics.ledger_residuals)
        if (k == id) return v;
      return kNaN;
    });
  }

  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["config_sha256"] = sha256_hex(cfg.source_text);
  ordered_json lv = ordered_json::array();
  for (int k = 0; k < levels; ++k) {
    const auto& m = out.levels[k].metrics;
    lv.push_back({{"level", k},
                  {"dir", level_dir(k).filename().string()},
                  {"h", m.h},
                  {"dt", m.dt},
                  {"energy_drift", m.energy_drift},
                  {"quadrature_drift", m.quadrature_drift},
                  {"decomposition_error", m.decomposition_error},
                  {"cone_residual", jnum(m.cone_residual)},
                  {"mu_discrepancy", jnum(m.mu_discrepancy)},
                  {"all_pass", out.levels[k].all_pass()}});
  }
  j["levels"] = lv;
  ordered_json oj = ordered_json::object();
  std::string csv = "metric,level,h,value,order\n";
  for (const auto& [name, o] : out.orders) {
    ordered_json arr = ordered_json::array();
    for (double v : o) arr.push_back(jnum(v));
    oj[name] = arr;
  }
  j["orders"] = oj;
  write_file(out_dir / "convergence.json", j.dump(2) + "\n");
  for (std::size_t q = 0; q < out.orders.size(); ++q) {
    const auto& name = out.orders[q].first;
    for (int k = 0; k < levels; ++k) {
      double v = kNaN;
      const auto& m = out.levels[k].metrics;
      if (name == "energy_drift") v = m.energy_drift;
      else if (name == "quadrature_drift") v = m.quadrature_drift;
      else if (name == "decomposition_error") v = m.decomposition_error;
      else if (name == "cone_residual") v = m.cone_residual;
      else if (name == "mu_discrepancy") v = m.mu_discrepancy;
      else
        for (const auto& [id, r] : m.ledger_residuals)
          if ("residual[" + id + "]" == name) v = r;
      const double ord = k == 0 ? kNaN : out.orders[q].second[k - 1];
      csv += name + "," + std::to_string(k) + "," + num(m.h) + "," + num(v) + "," + num(ord) + "\n";
    }
  }
  write_file(out_dir / "convergence.csv", csv);
  return out;
}

VerifyResult verify_report(const fs::path& report) {
  const std::string text = read_file(report);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("report is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("checks") || !j["checks"].is_array())
    throw ConfigError("report has no checks array");
  VerifyResult r;
  for (const auto& c : j["checks"]) {
    if (!c.is_object() || !c.contains("pass") || !c["pass"].is_boolean() || !c.contains("name"))
      throw ConfigError("malformed check entry in report");
    ++r.total;
    if (!c["pass"].get<bool>()) {
      ++r.failed;
      r.failures.push_back(c["name"].get<std::string>());
    }
  }
  return r;
}

}  // namespace conewave
