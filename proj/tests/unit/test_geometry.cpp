#include <doctest.h>

#include <cmath>

#include "conewave/geometry.hpp"
#include "conewave/solver.hpp"
#include "fixtures.hpp"

using namespace conewave;
using fixtures::order;

namespace {

SimState radial_field(int n, double L, double (*f)(double)) {
  SimState s = SimState::zeros(Grid::radial(L, n), ProblemSpec::make(3.0));
  for (int i = 0; i < n; ++i) s.u[i] = f(s.grid.r(i));
  return s;
}

double gauss(double r) { return std::exp(-r * r); }

}  // namespace

TEST_CASE("L operators: zero field") {
  const SimState s = SimState::zeros(Grid::radial(4.0, 64), ProblemSpec::make(3.0));
  for (double v : apply_L(s)) CHECK(v == 0.0);
  const auto [p, m] = apply_Lpm(s);
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(p[k] == 0.0);
    CHECK(m[k] == 0.0);
  }
  const auto e = energies(s, 0.5, 2.0);
  CHECK(e.E == 0.0);
  CHECK(e.E_minus == 0.0);
  CHECK(e.E_plus == 0.0);
}

TEST_CASE("L annihilates 1/r away from the axis") {
  // the centered u-stencil is exact only up to O(h²); check the limit on r ∈ [1, 7]
  double err[3];
  for (int k = 0; k < 3; ++k) {
    const SimState s = radial_field(400 << k, 8.0, [](double r) { return 1.0 / r; });
    const auto L = apply_L(s);
    double e = 0.0;
    for (int i = 0; i < s.grid.n_r; ++i)
      if (s.grid.r(i) >= 1.0 && s.grid.r(i) <= 7.0) e = std::max(e, std::fabs(L[i]));
    err[k] = e;
  }
  CHECK(err[2] < 1e-3);
  CHECK(order(err[0], err[1]) >= 1.9);
  CHECK(order(err[1], err[2]) >= 1.9);
}

TEST_CASE("L+ and L- of a static Gaussian converge at second order") {
  double err[3];
  for (int k = 0; k < 3; ++k) {
    const SimState s = radial_field(200 << k, 6.0, gauss);
    const auto [p, m] = apply_Lpm(s);
    double e = 0.0;
    for (int i = 0; i < s.grid.n_r; ++i) {
      const double r = s.grid.r(i);
      if (r < 0.25 || r > 4.0) continue;
      const double exact = std::exp(-r * r) * (1.0 / r - 2.0 * r);
      e = std::max({e, std::fabs(p[i] - exact), std::fabs(m[i] - exact)});
    }
    err[k] = e;
  }
  CHECK(order(err[0], err[1]) >= 1.8);
  CHECK(order(err[1], err[2]) >= 1.8);
}

TEST_CASE("slashed gradient: radial field vanishes, z-tilt field matches the closed form") {
  const SimState r = radial_field(128, 6.0, gauss);
  for (double v : slashed_grad_sq(r)) CHECK(v == 0.0);

  double err[2];
  for (int k = 0; k < 2; ++k) {
    const int n = 64 << k;
    const Grid g = Grid::axisym(4.0, 4.0, n, 2 * n);
    SimState s = SimState::zeros(g, ProblemSpec::make(3.0));
    for (int j = 0; j < g.n_z; ++j)
      for (int i = 0; i < g.n_rho; ++i) {
        const double rho = g.rho(i), z = g.z(j);
        s.u[g.idx(i, j)] = 0.5 * z * std::exp(-(rho * rho + z * z));
      }
    const auto a = slashed_grad_sq(s);
    const auto cells = cell_data(s);
    double e = 0.0, ortho = 0.0;
    for (int j = 0; j < g.n_z; ++j)
      for (int i = 0; i < g.n_rho; ++i) {
        const double rho = g.rho(i), z = g.z(j), R2 = rho * rho + z * z;
        if (R2 > 6.0) continue;
        const double sin2 = rho * rho / R2;
        e = std::max(e, std::fabs(a[g.idx(i, j)] - 0.25 * sin2 * std::exp(-2.0 * R2)));
        const CellData& c = cells[g.idx(i, j)];
        ortho = std::max(ortho, std::fabs(c.ur * c.ur + c.uang2 - c.grad2));
      }
    err[k] = e;
    CHECK(ortho < 1e-12);
  }
  CHECK(order(err[0], err[1]) >= 1.8);
}

TEST_CASE("densities are nonnegative") {
  const auto& ev = fixtures::radial_run(256, 5.0);
  const auto pr = ProblemSpec::make(3.0);
  for (std::size_t k = 0; k < ev.trace.size(); k += 50)
    for (const auto& c : cell_data(ev.trace[k]))
      for (auto kind : {DensityKind::Full, DensityKind::Inward, DensityKind::Outward, DensityKind::Potential}) {
        const Density d = density(c, pr, kind);
        CHECK(d.regular + d.inv_r2_coef * c.u * c.u / (c.r * c.r) >= -1e-14);
      }
}

TEST_CASE("inward plus outward energy equals the energy over all space") {
  const InitialData d = fixtures::gauss();
  SolverConfig cfg;
  const Grid g = Grid::radial(causal_radius(d, cfg) + 1.0, 4096);
  const SimState s = initial_state(d, ProblemSpec::make(3.0), g);
  const auto e = energies(s);
  CHECK(std::fabs(e.E_minus + e.E_plus - e.E) <= 1e-6 * e.E);
  CHECK(e.E_minus == doctest::Approx(e.E_plus).epsilon(1e-14));  // zero velocity
  const auto [L2, ur2] = grid_operator_integrals(s, 0.0, g.reach());
  CHECK(L2 == doctest::Approx(ur2).epsilon(1e-6));
}

TEST_CASE("annulus mismatch equals the boundary term") {
  // E₋ + E₊ - E(annulus) = ½[(1/r₂)∫_{|x|=r₂}u² - (1/r₁)∫_{|x|=r₁}u²]
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const auto& ev = fixtures::radial_run(1024 << k, 2.0);
    const SimState& s = ev.trace[ev.trace.size() - 1];
    const auto e = energies(s, 1.0, 2.0);
    const double bnd = 0.5 * (sphere_u2(s, 2.0) / 2.0 - sphere_u2(s, 1.0) / 1.0);
    CHECK(std::fabs(bnd) > 1e-3 * e.E);
    err[k] = std::fabs(e.E_minus + e.E_plus - e.E - bnd);
    CHECK(err[k] <= 1e-4 * e.E);
  }
  CHECK(order(err[0], err[1]) >= 1.5);
}

TEST_CASE("annulus mismatch on the axisymmetric grid") {
  const auto& ev = fixtures::axisym_run(fixtures::ztilt(), 128, 8.0, "ztilt");
  const SimState& s = ev.trace[ev.trace.size() / 4];
  const auto e = energies(s, 1.0, 2.0);
  const double bnd = 0.5 * (sphere_u2(s, 2.0) / 2.0 - sphere_u2(s, 1.0));
  CHECK(std::fabs(e.E_minus + e.E_plus - e.E - bnd) <= 2e-2 * e.E);
}

TEST_CASE("decomposition identity at every stored time converges") {
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const auto& ev = fixtures::radial_run(1024 << k, 5.0);
    double e = 0.0;
    const double E = energies(ev.trace[0]).E;
    for (const auto& s : ev.trace.states()) {
      const auto en = energies(s);
      e = std::max(e, std::fabs(en.E_minus + en.E_plus - en.E) / E);
    }
    err[k] = e;
  }
  CHECK(err[1] < 1e-4);
  CHECK(order(err[0], err[1]) >= 1.8);
}

TEST_CASE("sphere integrals of a constant field") {
  SimState s = SimState::zeros(Grid::axisym(4.0, 4.0, 64, 128), ProblemSpec::make(3.0));
  std::fill(s.u.begin(), s.u.end(), 1.0);
  CHECK(sphere_u2(s, 1.0) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-10));
  SimState r = SimState::zeros(Grid::radial(4.0, 64), ProblemSpec::make(3.0));
  std::fill(r.u.begin(), r.u.end(), 1.0);
  CHECK(sphere_u2(r, 2.0) == doctest::Approx(16.0 * std::numbers::pi).epsilon(1e-10));
}
