#include "conewave/interpolate.hpp"

#include <cmath>
#include <string>

#include "conewave/errors.hpp"

namespace conewave {

namespace {

// Field value with ghost rules: even mirror across r = 0 / ρ = 0, zero beyond the outer edge.
inline double radial_at(const std::vector<double>& f, int n, int i) {
  if (i < 0) i = -1 - i;
  return i < n ? f[static_cast<std::size_t>(i)] : 0.0;
}

inline double axi_at(const std::vector<double>& f, const Grid& g, int i, int j) {
  if (i < 0) i = -1 - i;
  if (i >= g.n_rho || j < 0 || j >= g.n_z) return 0.0;
  return f[g.idx(i, j)];
}

CylValues sample_radial(const SimState& s, double r) {
  const Grid& g = s.grid;
  if (!(r >= 0.0) || r > g.reach() + 1e-12 * g.R_max)
    throw DomainError("radius " + std::to_string(r) + " outside interpolation range");
  const double x = r / g.dr - 0.5;
  const int i0 = static_cast<int>(std::floor(x));
  const double f = x - i0;
  const int n = g.n_r;
  auto at = [&](int i) {
    CylValues v;
    v.u = radial_at(s.u, n, i);
    v.ut = radial_at(s.ut, n, i);
    v.u_rho = (radial_at(s.u, n, i + 1) - radial_at(s.u, n, i - 1)) / (2.0 * g.dr);
    return v;
  };
  const CylValues a = at(i0);
  const CylValues b = at(i0 + 1);
  CylValues out;
  out.u = (1.0 - f) * a.u + f * b.u;
  out.ut = (1.0 - f) * a.ut + f * b.ut;
  out.u_rho = (1.0 - f) * a.u_rho + f * b.u_rho;
  return out;
}

CylValues sample_axisym(const SimState& s, double rho, double z) {
  const Grid& g = s.grid;
  const double eps = 1e-12 * (g.P_max + g.Z_max);
  if (!(rho >= -eps) || rho > g.P_max - 1.5 * g.drho + eps || std::fabs(z) > g.Z_max - 1.5 * g.dz + eps)
    throw DomainError("point (rho=" + std::to_string(rho) + ", z=" + std::to_string(z) +
                      ") outside interpolation range");
  rho = std::max(rho, 0.0);
  const double x = rho / g.drho - 0.5;
  const double y = (z + g.Z_max) / g.dz - 0.5;
  const int i0 = static_cast<int>(std::floor(x));
  const int j0 = static_cast<int>(std::floor(y));
  const double fx = x - i0;
  const double fy = y - j0;
  auto at = [&](int i, int j) {
    CylValues v;
    v.u = axi_at(s.u, g, i, j);
    v.ut = axi_at(s.ut, g, i, j);
    v.u_rho = (axi_at(s.u, g, i + 1, j) - axi_at(s.u, g, i - 1, j)) / (2.0 * g.drho);
    v.u_z = (axi_at(s.u, g, i, j + 1) - axi_at(s.u, g, i, j - 1)) / (2.0 * g.dz);
    return v;
  };
  const CylValues c00 = at(i0, j0), c10 = at(i0 + 1, j0), c01 = at(i0, j0 + 1), c11 = at(i0 + 1, j0 + 1);
  const double w00 = (1 - fx) * (1 - fy), w10 = fx * (1 - fy), w01 = (1 - fx) * fy, w11 = fx * fy;
  CylValues out;
  out.u = w00 * c00.u + w10 * c10.u + w01 * c01.u + w11 * c11.u;
  out.ut = w00 * c00.ut + w10 * c10.ut + w01 * c01.ut + w11 * c11.ut;
  out.u_rho = w00 * c00.u_rho + w10 * c10.u_rho + w01 * c01.u_rho + w11 * c11.u_rho;
  out.u_z = w00 * c00.u_z + w10 * c10.u_z + w01 * c01.u_z + w11 * c11.u_z;
  return out;
}

PointValues to_spherical(const CylValues& c, double r, double theta, bool radial) {
  PointValues p;
  p.u = c.u;
  p.ut = c.ut;
  if (radial) {
    p.ur = c.u_rho;
    return p;
  }
  const double st = std::sin(theta), ct = std::cos(theta);
  p.ur = c.u_rho * st + c.u_z * ct;
  p.uth = r * (c.u_rho * ct - c.u_z * st);
  return p;
}

}  // namespace

CylValues sample_cyl(const SimState& s, double rho, double z) {
  return s.grid.radial() ? sample_radial(s, rho) : sample_axisym(s, rho, z);
}

PointValues sample(const SimState& s, double r, double theta) {
  const bool radial = s.grid.radial();
  const CylValues c = radial ? sample_radial(s, r) : sample_axisym(s, r * std::sin(theta), r * std::cos(theta));
  return to_spherical(c, r, theta, radial);
}

PointValues interpolate(const SpacetimeTrace& trace, double r, double theta, double t) {
  const auto br = trace.locate(t);
  const PointValues a = sample(trace[br.j], r, theta);
  if (br.w == 0.0) return a;
  const PointValues b = sample(trace[br.j + 1], r, theta);
  const double wa = 1.0 - br.w;
  return {wa * a.u + br.w * b.u, wa * a.ut + br.w * b.ut, wa * a.ur + br.w * b.ur, wa * a.uth + br.w * b.uth};
}

double origin_value(const SimState& s) {
  const Grid& g = s.grid;
  // even extension: u(ρ) = a + bρ² through the first two centers gives a = (9u₀ - u₁)/8
  if (g.radial()) return (9.0 * s.u[0] - s.u[1]) / 8.0;
  auto axis = [&](int j) { return (9.0 * s.u[g.idx(0, j)] - s.u[g.idx(1, j)]) / 8.0; };
  // cubic Lagrange in z through the four centers nearest z = 0
  const double y = g.Z_max / g.dz - 0.5;
  int j1 = static_cast<int>(std::floor(y));
  j1 = std::max(1, std::min(j1, g.n_z - 3));
  double val = 0.0;
  for (int a = -1; a <= 2; ++a) {
    double L = 1.0;
    for (int b = -1; b <= 2; ++b) {
      if (b == a) continue;
      L *= (y - (j1 + b)) / static_cast<double>(a - b);
    }
    val += L * axis(j1 + a);
  }
  return val;
}

}  // namespace conewave
