#include <doctest.h>

#include <cmath>

#include "conewave/errors.hpp"
#include "conewave/geometry.hpp"
#include "conewave/solver.hpp"
#include "fixtures.hpp"

using namespace conewave;
using fixtures::order;

namespace {

double dalembert_u(double r, double t) {
  auto f = [](double s) { return s * std::exp(-s * s); };
  return 0.5 * (f(r + t) + f(r - t)) / r;
}

}  // namespace

TEST_CASE("zero state stays zero") {
  const auto pr = ProblemSpec::make(3.0);
  SimState s = SimState::zeros(Grid::radial(4.0, 64), pr);
  for (int k = 0; k < 10; ++k) step_radial(s, 0.02);
  for (double v : s.u) CHECK(v == 0.0);
  SimState a = SimState::zeros(Grid::axisym(4.0, 4.0, 16, 32), pr);
  for (int k = 0; k < 10; ++k) step_axisym(a, 0.02);
  for (double v : a.u) CHECK(v == 0.0);
  for (double v : a.ut) CHECK(v == 0.0);
}

TEST_CASE("time step and configuration errors") {
  const Grid g = Grid::radial(10.0, 100);
  CHECK(max_time_step(g, 0.5) == doctest::Approx(0.05));
  const Grid a = Grid::axisym(10.0, 10.0, 100, 100);
  CHECK(max_time_step(a, 0.5) == doctest::Approx(0.5 * 0.1 / std::sqrt(2.0)));
  CHECK_THROWS_AS(max_time_step(g, 0.0), ConfigError);
  CHECK_THROWS_AS(max_time_step(g, 0.95), ConfigError);

  SolverConfig cfg;
  cfg.T_end = 10.0;
  CHECK_THROWS_AS(evolve(fixtures::gauss(), ProblemSpec::make(3.0), Grid::radial(8.0, 256), cfg), ConfigError);
  CHECK_THROWS_AS(initial_state(fixtures::ztilt(), ProblemSpec::make(3.0), Grid::radial(20.0, 256)), ConfigError);
}

TEST_CASE("linear regime matches the d'Alembert solution at second order") {
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const auto& ev = fixtures::radial_run(512 << k, 3.0, 0.0);
    const SimState& s = ev.trace[ev.trace.size() - 1];
    REQUIRE(s.t == doctest::Approx(3.0));
    double e = 0.0;
    for (int i = 0; i < s.grid.n_r; ++i) e = std::max(e, std::fabs(s.u[i] - dalembert_u(s.grid.r(i), s.t)));
    err[k] = e;
  }
  CHECK(err[1] < 2e-3);
  CHECK(order(err[0], err[1]) >= 1.8);
}

TEST_CASE("T_end = 0 gives one state with the data energy") {
  SolverConfig cfg;
  const InitialData d = fixtures::gauss();
  const Grid g = Grid::radial(causal_radius(d, cfg) + 1.0, 1024);
  const auto ev = evolve(d, ProblemSpec::make(3.0), g, cfg);
  CHECK(ev.trace.size() == 1u);
  CHECK(ev.energy.E.size() == 1u);
  const double Eq = weighted_energies(d, ProblemSpec::make(3.0), 0.0).E;
  CHECK(energies(ev.trace[0]).E == doctest::Approx(Eq).epsilon(1e-4));
  CHECK(discrete_energy(ev.trace[0]) == doctest::Approx(Eq).epsilon(1e-4));
}

TEST_CASE("time reversal recovers the data") {
  const InitialData d = fixtures::gauss();
  const auto pr = ProblemSpec::make(3.0);
  const Grid g = Grid::radial(8.0, 512);
  const double dt = max_time_step(g, 0.5);
  const SimState s0 = initial_state(d, pr, g);
  SimState s = s0;
  const int n = static_cast<int>(std::lround(1.0 / dt));
  for (int k = 0; k < n; ++k) step_radial(s, dt);
  for (double& v : s.ut) v = -v;
  for (int k = 0; k < n; ++k) step_radial(s, dt);
  double e = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) e = std::max(e, std::fabs(s.u[i] - s0.u[i]));
  CHECK(e < 1e-10);
}

TEST_CASE("two-sided run of data with zero velocity is even in time") {
  const auto& ev = fixtures::radial_run(512, 2.0, 1.0, -2.0);
  const auto& tr = ev.trace;
  CHECK(tr.t_first() == doctest::Approx(-2.0));
  CHECK(tr.t_last() == doctest::Approx(2.0));
  const std::size_t n = tr.size();
  REQUIRE(n % 2 == 1);
  for (std::size_t k = 0; k < n / 2; k += 7) {
    const SimState& a = tr[k];
    const SimState& b = tr[n - 1 - k];
    CHECK(a.t == doctest::Approx(-b.t));
    double e = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) e = std::max(e, std::fabs(a.u[i] - b.u[i]));
    CHECK(e < 1e-12);
  }
}

TEST_CASE("radial energy drift converges at second order") {
  double drift[3];
  for (int k = 0; k < 3; ++k) drift[k] = fixtures::radial_run(256 << k, 5.0).energy.max_rel_drift;
  CHECK(order(drift[0], drift[1]) >= 1.8);
  CHECK(order(drift[1], drift[2]) >= 1.8);
}

TEST_CASE("axisymmetric z-tilt energy drift converges at second order") {
  double drift[3];
  for (int k = 0; k < 3; ++k) drift[k] = fixtures::axisym_run(fixtures::ztilt(), 64 << k, 8.0, "ztilt").energy.max_rel_drift;
  CHECK(drift[2] < 2e-3);
  CHECK(order(drift[1], drift[2]) >= 1.8);
}

TEST_CASE("energy series is sampled at half steps") {
  const auto& ev = fixtures::radial_run(256, 5.0);
  REQUIRE(ev.energy.t.size() >= 2u);
  CHECK(ev.energy.t[0] == doctest::Approx(0.5 * ev.energy.dt));
  CHECK(ev.energy.t.back() == doctest::Approx(5.0 - 0.5 * ev.energy.dt));
}
