#include <doctest.h>

#include <cmath>
#include <limits>

#include "conewave/errors.hpp"
#include "conewave/grid.hpp"
#include "conewave/interpolate.hpp"
#include "conewave/problem.hpp"
#include "conewave/region.hpp"
#include "conewave/state.hpp"

using namespace conewave;

TEST_CASE("problem definition: exponent range and critical index") {
  CHECK(ProblemSpec::make(3.0).s_p() == doctest::Approx(0.5));
  CHECK(ProblemSpec::make(5.0).s_p() == doctest::Approx(1.0));
  CHECK(ProblemSpec::make(4.0).s_p() == doctest::Approx(1.5 - 2.0 / 3.0));
  CHECK_THROWS_AS(ProblemSpec::make(2.5), ConfigError);
  CHECK_THROWS_AS(ProblemSpec::make(5.5), ConfigError);
  CHECK_THROWS_AS(ProblemSpec::make(3.0, -1.0), ConfigError);
  const auto pr = ProblemSpec::make(3.0);
  CHECK(pr.potential(2.0) == doctest::Approx(4.0));
  CHECK(pr.force(-2.0) == doctest::Approx(-8.0));
  CHECK(ProblemSpec::make(3.0, 0.0).force(2.0) == 0.0);
}

TEST_CASE("grid: cell centers avoid the axis") {
  const Grid g = Grid::radial(10.0, 100);
  CHECK(g.dr == doctest::Approx(0.1));
  CHECK(g.r(0) == doctest::Approx(0.05));
  const Grid a = Grid::axisym(4.0, 4.0, 40, 80);
  CHECK(a.rho(0) == doctest::Approx(0.05));
  CHECK(a.z(0) == doctest::Approx(-3.95));
  CHECK(a.size() == 3200u);
  CHECK_THROWS(Grid::radial(0.0, 10));
  CHECK_THROWS(Grid::radial(1.0, 0));
}

TEST_CASE("state: non-finite samples abort") {
  const Grid g = Grid::radial(1.0, 8);
  SimState s = SimState::zeros(g, ProblemSpec::make(3.0));
  CHECK_NOTHROW(s.check());
  s.u[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(s.check(), RuntimeAbort);
  s.u.pop_back();
  CHECK_THROWS_AS(s.check(), RuntimeAbort);
}

TEST_CASE("trace: uniform spacing and window queries") {
  const Grid g = Grid::radial(1.0, 8);
  const auto pr = ProblemSpec::make(3.0);
  SpacetimeTrace tr(g, pr, 2, 0.05);
  for (int k = 0; k < 5; ++k) tr.append(SimState::zeros(g, pr, 0.1 * k));
  CHECK(tr.t_first() == 0.0);
  CHECK(tr.t_last() == doctest::Approx(0.4));
  CHECK_THROWS_AS(tr.locate(0.5), DomainError);
  CHECK_THROWS_AS(tr.locate(-0.01), DomainError);
  const auto br = tr.locate(0.25);
  CHECK(br.j == 2u);
  CHECK(br.w == doctest::Approx(0.5));
  CHECK_THROWS(tr.append(SimState::zeros(g, pr, 0.7)));
}

TEST_CASE("interpolate: constant field") {
  const Grid g = Grid::axisym(4.0, 4.0, 40, 80);
  const auto pr = ProblemSpec::make(3.0);
  SimState s = SimState::zeros(g, pr);
  std::fill(s.u.begin(), s.u.end(), 1.0);
  SpacetimeTrace tr(g, pr, 1, 0.1);
  tr.append(s);
  const PointValues p = interpolate(tr, 1.3, 0.7, 0.0);
  CHECK(p.u == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.ut == 0.0);
  CHECK(std::fabs(p.ur) < 1e-12);
  CHECK(std::fabs(p.uth) < 1e-12);
}

TEST_CASE("interpolate: u = z is reproduced exactly on the axisymmetric grid") {
  const Grid g = Grid::axisym(4.0, 4.0, 40, 80);
  const auto pr = ProblemSpec::make(3.0);
  SimState s = SimState::zeros(g, pr);
  for (int j = 0; j < g.n_z; ++j)
    for (int i = 0; i < g.n_rho; ++i) s.u[g.idx(i, j)] = g.z(j);
  SpacetimeTrace tr(g, pr, 1, 0.1);
  tr.append(s);
  const PointValues p = interpolate(tr, 1.0, 0.0, 0.0);
  CHECK(p.u == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p.ur == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(p.uth) < 1e-12);
}

TEST_CASE("interpolate: radial Gaussian derivative converges at second order") {
  const auto pr = ProblemSpec::make(3.0);
  const double exact = -2.0 * std::exp(-1.0);
  CHECK(exact == doctest::Approx(-0.7358).epsilon(1e-4));
  double err[3];
  for (int k = 0; k < 3; ++k) {
    const Grid g = Grid::radial(6.0, 200 << k);
    SimState s = SimState::zeros(g, pr);
    for (int i = 0; i < g.n_r; ++i) s.u[i] = std::exp(-g.r(i) * g.r(i));
    SpacetimeTrace tr(g, pr, 1, 0.1);
    tr.append(s);
    err[k] = std::fabs(interpolate(tr, 1.0, 0.0, 0.0).ur - exact);
  }
  CHECK(err[2] < 1e-4);
  CHECK(std::log2(err[0] / err[1]) >= 1.8);
  CHECK(std::log2(err[1] / err[2]) >= 1.8);
}

TEST_CASE("region: cone-law triangle") {
  const RegionSpec r = cone_region(1.0, 2.0);
  REQUIRE(r.segments.size() == 3u);
  CHECK(r.segments[0].type == SegmentType::TimeSliceDown);  // base, outward normal points to the past
  CHECK(r.segments[1].type == SegmentType::BackwardConeUp);
  CHECK(r.segments[2].type == SegmentType::TAxis);
  CHECK(r.has_axis());
  CHECK(r.t_min() == 1.0);
  CHECK(r.t_max() == 3.0);
}

TEST_CASE("region: rectangle has two slices and two cylinders") {
  const RegionSpec r = rectangle_region(1.0, 2.0, 0.0, 1.0);
  int slices = 0, cyl = 0;
  for (const auto& s : r.segments) {
    if (s.type == SegmentType::TimeSliceUp || s.type == SegmentType::TimeSliceDown) ++slices;
    if (s.type == SegmentType::CylinderInward || s.type == SegmentType::CylinderOutward) ++cyl;
  }
  CHECK(slices == 2);
  CHECK(cyl == 2);
  CHECK_FALSE(r.has_axis());
}

TEST_CASE("region: orientation is normalized and invalid polygons rejected") {
  const RegionSpec cw = validate_region({{0.0, 1.0}, {0.0, 3.0}, {2.0, 1.0}});
  const RegionSpec ccw = cone_region(1.0, 2.0);
  REQUIRE(cw.segments.size() == ccw.segments.size());
  for (std::size_t k = 0; k < cw.segments.size(); ++k) CHECK(cw.segments[k].type == ccw.segments[k].type);
  CHECK_THROWS_AS(validate_region({{0.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}}), ConfigError);  // slope -1/2 edge
  CHECK_THROWS_AS(validate_region({{0.0, 0.0}, {1.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(validate_region({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(validate_region({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(validate_region({{-1.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}), ConfigError);
  for (auto t : {SegmentType::TimeSliceUp, SegmentType::CylinderInward, SegmentType::ForwardConeUp})
    CHECK(flipped(flipped(t)) == t);
  CHECK(segment_type_from_string("BackwardConeUp") == SegmentType::BackwardConeUp);
}

TEST_CASE("region: time slices") {
  const RegionSpec r = cone_shell_region(0.0, 1.0, 3.0);
  const auto s = slice(r, 0.5);
  REQUIRE(s.size() == 1u);
  CHECK(s[0].a == doctest::Approx(0.5));
  CHECK(s[0].b == doctest::Approx(2.5));
  CHECK(slice(r, 4.0).empty());
}
