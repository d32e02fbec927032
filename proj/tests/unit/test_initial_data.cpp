#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conewave/errors.hpp"
#include "conewave/initial_data.hpp"

using namespace conewave;

namespace {

const double kPi = std::numbers::pi;
// ∫ e^{-r²} data, p = 3: 8π·(3/8)√π·2^{-5/2} + π(√π/4)·4^{-3/2}
const double kGaussE = 3.1270621147;
const double kGaussE1 = 6.3668295387;  // E + π + π/32

InitialData gauss() { return gaussian_data(1.0, 1.0, 0.0, AngularProfile::Monopole); }
InitialData ztilt() { return gaussian_data(1.0, 1.0, 0.0, AngularProfile::ZTilt); }

std::vector<std::pair<std::string, InitialData>> families() {
  return {{"monopole", gauss()},
          {"ztilt", ztilt()},
          {"shifted monopole", gaussian_data(1.0, 1.0, 0.7, AngularProfile::Monopole)},
          {"narrow monopole", gaussian_data(2.0, 0.5, 0.0, AngularProfile::Monopole)},
          {"cutoff monopole", cutoff_data(gauss(), 1.0)}};
}

}  // namespace

TEST_CASE("gaussian data: closed-form samples") {
  const InitialData d = gauss();
  CHECK(d.radial);
  CHECK(d.u0(0.3, 0.4) == doctest::Approx(std::exp(-0.25)));
  const auto [gr, gz] = d.grad_u0(0.3, 0.4);
  CHECK(gr == doctest::Approx(-2.0 * 0.3 * std::exp(-0.25)));
  CHECK(gz == doctest::Approx(-2.0 * 0.4 * std::exp(-0.25)));
  CHECK(d.u1(0.3, 0.4) == 0.0);
  CHECK(d.support_radius > 5.0);
  CHECK(d.support_radius < 5.5);

  const InitialData z = gaussian_data(0.0, 1.0, 0.0, AngularProfile::ZTilt);
  CHECK(z.u0(0.2, 0.1) == 0.0);
  CHECK_THROWS_AS(gaussian_data(1.0, 0.0, 0.0, AngularProfile::Monopole), ConfigError);
  CHECK_THROWS_AS(gaussian_data(-1.0, 1.0, 0.0, AngularProfile::Monopole), ConfigError);
}

TEST_CASE("z-tilt data: angular gradient") {
  const InitialData d = ztilt();
  CHECK_FALSE(d.radial);
  for (double r : {0.3, 1.0, 1.7})
    for (double th : {0.2, 1.0, 2.5}) {
      const double rho = r * std::sin(th), z = r * std::cos(th);
      const auto [gr, gz] = d.grad_u0(rho, z);
      const double ang = std::cos(th) * gr - std::sin(th) * gz;  // (1/r)∂θu
      const double expect = 0.25 * std::sin(th) * std::sin(th) * std::exp(-2.0 * r * r);
      CHECK(ang * ang == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("weighted energies: zero data") {
  const auto w = weighted_energies(gaussian_data(0.0, 1.0, 0.0, AngularProfile::Monopole), ProblemSpec::make(3.0), 0.75);
  CHECK(w.E == 0.0);
  CHECK(w.E_kappa == 0.0);
  CHECK(w.K == 0.0);
  CHECK(w.E_10 == 0.0);
}

TEST_CASE("weighted energies: Gaussian closed forms") {
  const auto pr = ProblemSpec::make(3.0);
  const auto w0 = weighted_energies(gauss(), pr, 0.0);
  CHECK(w0.E == doctest::Approx(kGaussE).epsilon(1e-9));
  CHECK(w0.E == doctest::Approx(3.1267).epsilon(2e-4));
  CHECK(w0.E_kappa == doctest::Approx(2.0 * w0.E).epsilon(1e-12));
  const auto w1 = weighted_energies(gauss(), pr, 1.0);
  CHECK(w1.E_kappa == doctest::Approx(kGaussE1).epsilon(1e-9));
  CHECK(w1.E_kappa == doctest::Approx(kGaussE + kPi + kPi / 32.0).epsilon(1e-9));
  CHECK(w1.converged);
}

TEST_CASE("weighted energies: ordering on every family") {
  const auto pr = ProblemSpec::make(3.0);
  for (const auto& [name, d] : families()) {
    CAPTURE(name);
    for (double kappa : {0.25, 0.75, 1.0}) {
      const auto w = weighted_energies(d, pr, kappa);
      CHECK(w.converged);
      CHECK(w.E >= 0.0);
      CHECK(w.K >= 0.0);
      CHECK(w.E <= w.E_kappa);
      CHECK(w.K <= w.E_kappa * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("L-operator identity over all space, every family") {
  for (const auto& [name, d] : families()) {
    CAPTURE(name);
    const auto I = operator_integrals(d, 0.0, d.support_radius);
    CHECK(I.L2 == doctest::Approx(I.ur2).epsilon(1e-6));
  }
}

TEST_CASE("L-operator identities on balls and their complements") {
  for (const auto& [name, d] : families()) {
    CAPTURE(name);
    for (double R : {0.5, 1.0, 2.0}) {
      CAPTURE(R);
      const auto in = operator_integrals(d, 0.0, R);
      CHECK(in.L2 == doctest::Approx(in.ur2 + in.sphere_b).epsilon(1e-6));
      const auto out = operator_integrals(d, R, d.support_radius);
      CHECK(out.L2 == doctest::Approx(out.ur2 - out.sphere_a).epsilon(1e-6));
      const auto shell = operator_integrals(d, R, 2.0 * R);
      CHECK(shell.L2 == doctest::Approx(shell.ur2 + shell.sphere_b - shell.sphere_a).epsilon(1e-6));
    }
  }
}

TEST_CASE("cutoff profile") {
  CHECK(cutoff_profile(0.3) == 0.0);
  CHECK(cutoff_profile(0.5) == 0.0);
  CHECK(cutoff_profile(1.0) == 1.0);
  CHECK(cutoff_profile(0.75) == doctest::Approx(0.5));
  for (double x : {0.55, 0.7, 0.9}) {
    const double h = 1e-6;
    CHECK(cutoff_profile_derivative(x) ==
          doctest::Approx((cutoff_profile(x + h) - cutoff_profile(x - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("cutoff data") {
  const InitialData zero = cutoff_data(gaussian_data(0.0, 1.0, 0.0, AngularProfile::Monopole), 1.0);
  CHECK(zero.u0(0.7, 0.2) == 0.0);
  CHECK(zero.u0(2.0, 0.0) == 0.0);

  // pointwise convergence away from the origin
  const InitialData d = gauss();
  for (double r : {0.1, 0.01}) {
    const InitialData c = cutoff_data(d, r);
    for (double x : {0.2, 0.5, 1.5}) CHECK(c.u0(x, 0.0) == doctest::Approx(d.u0(x, 0.0)).epsilon(1e-14));
    CHECK(c.u0(0.2 * r, 0.0) == 0.0);
  }

  CHECK_THROWS_AS(cutoff_data(d, 0.0), ConfigError);
}

TEST_CASE("cutoff data: energy bounds") {
  const auto pr = ProblemSpec::make(3.0);
  const InitialData d = gauss();
  const auto full = weighted_energies(d, pr, 1.0);
  // E(cutoff) ≤ E(data) + C·∫_{½<|x|<1}|u0|²/|x|², C = sup|ψ'|²
  double sup_dpsi = 0.0;
  for (int k = 0; k <= 1000; ++k) sup_dpsi = std::max(sup_dpsi, std::fabs(cutoff_profile_derivative(0.5 + 0.5 * k / 1000.0)));
  const double hardy = integrate_data(d, 0.5, 1.0, [](double r, double, double u, double, double, double) {
    return u * u / (r * r);
  });
  const auto cut = weighted_energies(cutoff_data(d, 1.0), pr, 1.0);
  CHECK(cut.E <= full.E + sup_dpsi * sup_dpsi * hardy);

  // limsup_{r→0} E_{1,0}(cutoff) ≤ E_{1,0}(data)
  double prev = 1e300;
  for (double r : {0.2, 0.1, 0.05}) {
    const auto w = weighted_energies(cutoff_data(d, r), pr, 1.0);
    const double gap = std::fabs(w.E_10 - full.E_10);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-2 * full.E_10);
}

TEST_CASE("data families") {
  const auto f = data_families();
  REQUIRE(f.size() == 2u);
  CHECK(f[0].name == "monopole");
  CHECK(f[1].name == "ztilt");
}
