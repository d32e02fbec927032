#include "conewave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "conewave/errors.hpp"
#include "conewave/parallel.hpp"

namespace conewave {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Radial evolution in w = r·u, v = ∂ₜw. Ghosts: w₋₁ = -w₀ (u even), w_n = 0.
struct RadialStepper {
  const Grid& g;
  const ProblemSpec& pr;
  std::vector<double> w, v, acc, inv_rpm1, prev;

  RadialStepper(const SimState& s) : g(s.grid), pr(s.problem) {
    const int n = g.n_r;
    w.resize(n);
    v.resize(n);
    acc.resize(n);
    inv_rpm1.resize(n);
    for (int i = 0; i < n; ++i) {
      const double r = g.r(i);
      w[i] = r * s.u[i];
      v[i] = r * s.ut[i];
      inv_rpm1[i] = std::pow(r, 1.0 - pr.p);
    }
    accel();
  }

  void accel() {
    const int n = g.n_r;
    const double c = 1.0 / (g.dr * g.dr);
    for (int i = 0; i < n; ++i) {
      const double wl = i == 0 ? -w[0] : w[i - 1];
      const double wr = i == n - 1 ? 0.0 : w[i + 1];
      acc[i] = c * (wr - 2.0 * w[i] + wl) - pr.force(w[i]) * inv_rpm1[i];
    }
  }

  // Returns the staggered leapfrog energy at the half step when requested, else NaN.
  double step(double dt, bool want_energy = false) {
    const std::size_t n = w.size();
    const double half = 0.5 * dt;
    if (want_energy) prev = w;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] += half * acc[i];
      w[i] += dt * v[i];
    }
    const double e = want_energy ? staggered_energy() : std::nan("");
    accel();
    for (std::size_t i = 0; i < n; ++i) v[i] += half * acc[i];
    return e;
  }

  // Σ(Δa)(Δb)/dr with the odd ghost at the origin and w_n = 0.
  double stiffness(const std::vector<double>& a, const std::vector<double>& b) const {
    const int n = g.n_r;
    double acc_ = 0.0;
    for (int i = 0; i < n; ++i) {
      const double da = (i == n - 1 ? 0.0 : a[i + 1]) - a[i];
      const double db = (i == n - 1 ? 0.0 : b[i + 1]) - b[i];
      acc_ += da * db;
    }
    return (acc_ + 2.0 * a[0] * b[0]) / g.dr;
  }

  double potential_sum(const std::vector<double>& a) const {
    if (pr.coupling == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += ProblemSpec::abs_pow(a[i], pr.p + 1.0) / (pr.p + 1.0) * inv_rpm1[i];
    return pr.coupling * s;
  }

  // ½|v_{n+½}|² + ½⟨wⁿ, K wⁿ⁺¹⟩ + mean potential: exactly conserved when linear.
  double staggered_energy() const {
    double kin = 0.0;
    for (double x : v) kin += 0.5 * x * x;
    return kFourPi * (g.dr * (kin + 0.5 * (potential_sum(prev) + potential_sum(w))) + 0.5 * stiffness(prev, w));
  }

  void store(SimState& s) const {
    for (int i = 0; i < g.n_r; ++i) {
      const double r = g.r(i);
      s.u[i] = w[i] / r;
      s.ut[i] = v[i] / r;
    }
  }

  double energy() const {
    double kin = 0.0;
    for (double x : v) kin += 0.5 * x * x;
    return kFourPi * (g.dr * (kin + potential_sum(w)) + 0.5 * stiffness(w, w));
  }
};

// Cylindrical evolution with the conservative ρ-flux form; zero ghosts outside, none needed on the axis.
struct AxisymStepper {
  const Grid& g;
  const ProblemSpec& pr;
  std::vector<double> u, v, acc, prev;
  std::vector<double> a_left, a_right;  // ρ_{i∓½}/(ρ_i dρ²)

  AxisymStepper(const SimState& s) : g(s.grid), pr(s.problem), u(s.u), v(s.ut) {
    acc.resize(u.size());
    a_left.resize(g.n_rho);
    a_right.resize(g.n_rho);
    const double d2 = g.drho * g.drho;
    for (int i = 0; i < g.n_rho; ++i) {
      const double rho = g.rho(i);
      a_left[i] = (i * g.drho) / (rho * d2);
      a_right[i] = ((i + 1) * g.drho) / (rho * d2);
    }
    accel();
  }

  void accel() {
    const int nr = g.n_rho, nz = g.n_z;
    const double cz = 1.0 / (g.dz * g.dz);
    parallel_for(static_cast<std::size_t>(nz), 16, [&](std::size_t j0, std::size_t j1) {
      for (std::size_t jj = j0; jj < j1; ++jj) {
        const int j = static_cast<int>(jj);
        const double* row = &u[g.idx(0, j)];
        const double* below = j > 0 ? &u[g.idx(0, j - 1)] : nullptr;
        const double* above = j < nz - 1 ? &u[g.idx(0, j + 1)] : nullptr;
        double* out = &acc[g.idx(0, j)];
        for (int i = 0; i < nr; ++i) {
          const double c = row[i];
          const double l = i > 0 ? row[i - 1] : c;
          const double r = i < nr - 1 ? row[i + 1] : 0.0;
          const double b = below ? below[i] : 0.0;
          const double a = above ? above[i] : 0.0;
          out[i] = a_right[i] * (r - c) - a_left[i] * (c - l) + cz * (a - 2.0 * c + b) - pr.force(c);
        }
      }
    });
  }

  double step(double dt, bool want_energy = false) {
    const double half = 0.5 * dt;
    if (want_energy) prev = u;
    parallel_for(u.size(), 1 << 15, [&](std::size_t k0, std::size_t k1) {
      for (std::size_t k = k0; k < k1; ++k) {
        v[k] += half * acc[k];
        u[k] += dt * v[k];
      }
    });
    const double e = want_energy ? staggered(g, pr, prev, u, v) : std::nan("");
    accel();
    parallel_for(u.size(), 1 << 15, [&](std::size_t k0, std::size_t k1) {
      for (std::size_t k = k0; k < k1; ++k) v[k] += half * acc[k];
    });
    return e;
  }

  void store(SimState& s) const {
    s.u = u;
    s.ut = v;
  }

  double energy() const { return staggered(g, pr, u, u, v); }

  // 2π[Σρ(½v² + ½(P(a)+P(b))) dρdz + ½⟨a, K b⟩]; with a = b this is the Hamiltonian.
  static double staggered(const Grid& g, const ProblemSpec& pr, const std::vector<double>& a,
                          const std::vector<double>& b, const std::vector<double>& v) {
    const int nr = g.n_rho, nz = g.n_z;
    const double dr = g.drho, dz = g.dz;
    const double total = deterministic_sum(
        static_cast<std::size_t>(nz),
        [&](std::size_t jj) {
          const int j = static_cast<int>(jj);
          double cell = 0.0, frho = 0.0, fz = 0.0;
          for (int i = 0; i < nr; ++i) {
            const std::size_t k = g.idx(i, j);
            const double rho = g.rho(i);
            cell += rho * (0.5 * v[k] * v[k] + 0.5 * (pr.potential(a[k]) + pr.potential(b[k])));
            const double da = (i < nr - 1 ? a[k + 1] : 0.0) - a[k];
            const double db = (i < nr - 1 ? b[k + 1] : 0.0) - b[k];
            frho += (i + 1) * dr * da * db;
            const double za = (j < nz - 1 ? a[g.idx(i, j + 1)] : 0.0) - a[k];
            const double zb = (j < nz - 1 ? b[g.idx(i, j + 1)] : 0.0) - b[k];
            fz += rho * za * zb;
            if (j == 0) fz += rho * a[k] * b[k];
          }
          return cell * dr * dz + 0.5 * (frho * dz / dr + fz * dr / dz);
        },
        8);
    return kTwoPi * total;
  }
};

void ensure_causal(const InitialData& data, const Grid& g, double t_reach) {
  const double need = data.support_radius + t_reach;
  const double have = g.radial() ? g.R_max : std::min(g.P_max, g.Z_max);
  if (have < need)
    throw ConfigError("grid extent " + std::to_string(have) + " is below the causal radius R0 + T = " +
                      std::to_string(need));
}

}  // namespace

double max_time_step(const Grid& g, double cfl) {
  if (!(cfl > 0.0) || cfl > 0.9) throw ConfigError("cfl must lie in (0, 0.9]");
  return g.radial() ? cfl * g.dr : cfl * std::min(g.drho, g.dz) / std::numbers::sqrt2;
}

double discrete_energy(const SimState& s) {
  if (s.grid.radial()) return RadialStepper(s).energy();
  return AxisymStepper::staggered(s.grid, s.problem, s.u, s.u, s.ut);
}

void step_radial(SimState& s, double dt) {
  if (!s.grid.radial()) throw ConfigError("step_radial needs a radial grid");
  if (dt > max_time_step(s.grid, 0.9) * (1.0 + 1e-12)) throw ConfigError("time step violates the CFL bound");
  RadialStepper st(s);
  st.step(dt);
  st.store(s);
  s.t += dt;
  s.check();
}

void step_axisym(SimState& s, double dt) {
  if (s.grid.radial()) throw ConfigError("step_axisym needs an axisymmetric grid");
  if (dt > max_time_step(s.grid, 0.9) * (1.0 + 1e-12)) throw ConfigError("time step violates the CFL bound");
  AxisymStepper st(s);
  st.step(dt);
  st.store(s);
  s.t += dt;
  s.check();
}

SimState initial_state(const InitialData& data, const ProblemSpec& problem, const Grid& g) {
  SimState s = SimState::zeros(g, problem, 0.0);
  if (g.radial()) {
    if (!data.radial) throw ConfigError("radial backend needs radially symmetric data (family " + data.family + ")");
    for (int i = 0; i < g.n_r; ++i) {
      s.u[i] = data.u0(g.r(i), 0.0);
      s.ut[i] = data.u1(g.r(i), 0.0);
    }
  } else {
    for (int j = 0; j < g.n_z; ++j)
      for (int i = 0; i < g.n_rho; ++i) {
        const std::size_t k = g.idx(i, j);
        s.u[k] = data.u0(g.rho(i), g.z(j));
        s.ut[k] = data.u1(g.rho(i), g.z(j));
      }
  }
  s.check();
  return s;
}

double causal_radius(const InitialData& data, const SolverConfig& cfg) {
  return data.support_radius + std::max(cfg.T_end, -cfg.t_start);
}

namespace {

// Runs n_steps of size dt (negative dt integrates backward), storing every `stride` steps.
template <class Stepper>
void run_leg(const SimState& s0, double dt, long n_steps, int stride, int energy_stride,
             const std::function<void(const SimState&)>& emit, std::vector<double>& te,
             std::vector<double>& E) {
  Stepper st(s0);
  SimState cur = s0;
  if (n_steps == 0) {
    te.push_back(s0.t);
    E.push_back(st.energy());
    return;
  }
  for (long n = 1; n <= n_steps; ++n) {
    const bool store = n % stride == 0;
    const bool sample = n == 1 || (energy_stride > 0 ? n % energy_stride == 0 : store);
    const double e = st.step(dt, sample);
    const double t = s0.t + n * dt;
    if (sample) {
      te.push_back(t - 0.5 * dt);
      E.push_back(e);
      if (!std::isfinite(e)) throw RuntimeAbort("non-finite energy at t = " + std::to_string(t));
    }
    if (store) {
      st.store(cur);
      cur.t = t;
      cur.check();
      emit(cur);
    }
  }
}

}  // namespace

EvolveResult evolve(const InitialData& data, const ProblemSpec& problem, const Grid& grid,
                    const SolverConfig& cfg, const std::function<void(const SimState&)>& on_store) {
  if (cfg.T_end < 0.0) throw ConfigError("T_end must be >= 0");
  if (cfg.t_start > 0.0) throw ConfigError("t_start must be <= 0");
  ensure_causal(data, grid, std::max(cfg.T_end, -cfg.t_start));
  const int stride = cfg.store_stride > 0 ? cfg.store_stride : (grid.radial() ? 1 : 4);
  const int estride = cfg.energy_stride > 0 ? cfg.energy_stride : (grid.radial() ? 1 : 0);

  // Common step so both legs land on multiples of the store spacing.
  const double dt_max = max_time_step(grid, cfg.cfl);
  const double span = std::max(cfg.T_end, -cfg.t_start);
  double dt = dt_max;
  long blocks_f = 0, blocks_b = 0;
  if (span > 0.0) {
    const long blocks = static_cast<long>(std::ceil(span / (stride * dt_max) - 1e-9));
    dt = span / (static_cast<double>(blocks) * stride);
    blocks_f = static_cast<long>(std::llround(cfg.T_end / (stride * dt)));
    blocks_b = static_cast<long>(std::llround(-cfg.t_start / (stride * dt)));
  }

  const SimState s0 = initial_state(data, problem, grid);
  EvolveResult res{SpacetimeTrace(grid, problem, stride, dt), {}};
  res.energy.h = grid.h();
  res.energy.dt = dt;

  auto run = [&](double step, long blocks, const std::function<void(const SimState&)>& emit,
                 std::vector<double>& te, std::vector<double>& E) {
    if (grid.radial())
      run_leg<RadialStepper>(s0, step, blocks * stride, stride, estride, emit, te, E);
    else
      run_leg<AxisymStepper>(s0, step, blocks * stride, stride, estride, emit, te, E);
  };

  // The backward leg is buffered and replayed in time order.
  std::vector<SimState> back;
  std::vector<double> tb, Eb, tf, Ef;
  auto sink = [&](const SimState& s) {
    if (on_store) on_store(s);
    if (cfg.keep_trace) {
      res.trace.append(s);
    } else {
      res.trace = SpacetimeTrace(grid, problem, stride, dt);
      res.trace.append(s);
    }
  };

  if (blocks_b > 0) {
    run(-dt, blocks_b, [&](const SimState& s) { back.push_back(s); }, tb, Eb);
    for (auto it = back.rbegin(); it != back.rend(); ++it) sink(*it);
    back.clear();
  }
  sink(s0);
  run(dt, blocks_f, sink, tf, Ef);

  auto& rep = res.energy;
  for (std::size_t k = tb.size(); k-- > 0;) {
    rep.t.push_back(tb[k]);
    rep.E.push_back(Eb[k]);
  }
  rep.t.insert(rep.t.end(), tf.begin(), tf.end());
  rep.E.insert(rep.E.end(), Ef.begin(), Ef.end());
  const double E0 = Ef.front();
  double drift = 0.0;
  for (double e : rep.E) drift = std::max(drift, std::fabs(e - E0));
  rep.max_rel_drift = E0 > 0.0 ? drift / E0 : drift;
  return res;
}

}  // namespace conewave
