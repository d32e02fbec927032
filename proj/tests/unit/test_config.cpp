#include <doctest.h>

#include "conewave/config.hpp"
#include "conewave/errors.hpp"

using namespace conewave;

namespace {

const char* kGood = R"(
[problem]
p = 3
[data]
family = "monopole"
sigma = 1.0
[grid]
backend = "radial1d"
n_r = 512
[run]
T_end = 5
kappa = 0.75
output = "out"
[diagnostics]
cone_t0 = [0, 1]
cone_r0 = [2]
streaming = false
)";

std::string with(const std::string& extra) { return std::string(kGood) + extra; }

}  // namespace

TEST_CASE("config: valid file") {
  const RunConfig c = parse_config(kGood, "/tmp/base");
  CHECK(c.problem.p == 3.0);
  CHECK(c.backend == Backend::Radial1D);
  CHECK(c.n_r == 512);
  CHECK(c.solver.T_end == 5.0);
  CHECK(c.diag.cone_t0 == std::vector<double>{0.0, 1.0});
  CHECK(c.output == std::filesystem::path("/tmp/base/out"));
  CHECK(c.solver.keep_trace);
  const Grid g = c.grid(c.data());
  CHECK(g.n_r == 512);
  CHECK(g.R_max == doctest::Approx(c.data().support_radius + 6.0));
  CHECK(c.refined(2).n_r == 2048);
}

TEST_CASE("config: defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.family == "monopole");
  CHECK(c.solver.cfl == 0.5);
  CHECK(c.kappa == 0.75);
}

TEST_CASE("config: rejected entries") {
  CHECK_THROWS_AS(parse_config("[grid]\nn_r = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[extra]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[problem]\np = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[problem]\ncoupling = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\ncfl = 0.95\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\nkappa = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\nt_start = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[data]\nsigma = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[data]\nfamily = \"ztilt\"\n"), ConfigError);  // radial backend
  CHECK_THROWS_AS(parse_config("[data]\nfamily = \"dipole\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn_r = \"many\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn_r = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[diagnostics]\ncone_r0 = [0]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(with("[grid]\nextent = 2.0\n")), ConfigError);  // duplicate table
  CHECK_THROWS_AS(load_config("/nonexistent/conewave.toml"), ConfigError);
  const RunConfig small = parse_config("[grid]\nextent = 2.0\n[run]\nT_end = 5\n");
  CHECK_THROWS_AS(small.grid(small.data()), ConfigError);  // below the causal radius
}

TEST_CASE("config: axisymmetric z-tilt") {
  const RunConfig c = parse_config(
      "[data]\nfamily = \"ztilt\"\n[grid]\nbackend = \"axisym2d\"\nn_rho = 32\nn_z = 64\n[run]\nT_end = 2\n"
      "[diagnostics]\nstreaming = true\n");
  CHECK(c.backend == Backend::Axisym2D);
  CHECK_FALSE(c.solver.keep_trace);
  const Grid g = c.grid(c.data());
  CHECK(g.n_rho == 32);
  CHECK(g.n_z == 64);
  CHECK(g.P_max == g.Z_max);
}
