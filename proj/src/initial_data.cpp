#include "conewave/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conewave/errors.hpp"
#include "conewave/quadrature.hpp"

namespace conewave {

namespace {

constexpr double kTruncation = 1e-12;

double truncation_radius_gauss(double sigma) { return sigma * std::sqrt(std::log(1.0 / kTruncation)); }

// Radius beyond which (1 + r/2)·exp(-r²/σ²) stays below the truncation level of its peak.
double truncation_radius_ztilt(double sigma) {
  auto env = [&](double r) { return (1.0 + 0.5 * r) * std::exp(-r * r / (sigma * sigma)); };
  // envelope maximum: ½ - (1 + r/2)·2r/σ² = 0
  const double s2 = sigma * sigma;
  const double r_peak = std::max(0.0, -1.0 + std::sqrt(1.0 + s2 / 4.0));
  const double target = kTruncation * env(r_peak);
  double lo = r_peak, hi = r_peak + 1.0;
  while (env(hi) > target) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (env(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

struct Node {
  double r, c, w;  // radius, cosθ, weight including 2πr²
};

std::vector<Node> nodes(double a, double b, int n_r, int n_c) {
  const auto& g = quad::gauss8();
  std::vector<Node> out;
  out.reserve(static_cast<std::size_t>(n_r + 41) * n_c * 64);
  const double hr = (b - a) / n_r, hc = 2.0 / n_c;
  // cells in r; a cell touching the origin is split geometrically so |x|^κ weights converge
  std::vector<std::pair<double, double>> cells;
  for (int i = 0; i < n_r; ++i) cells.emplace_back(a + hr * i, a + hr * (i + 1));
  if (a == 0.0) {
    cells.erase(cells.begin());
    double hi = hr;
    for (int k = 0; k < 40; ++k, hi *= 0.5) cells.emplace_back(0.5 * hi, hi);
    cells.emplace_back(0.0, hi);
  }
  for (const auto& [lo, hi] : cells) {
    for (std::size_t ki = 0; ki < g.x.size(); ++ki) {
      const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.x[ki];
      const double wr = 0.5 * (hi - lo) * g.w[ki];
      for (int j = 0; j < n_c; ++j) {
        for (std::size_t kj = 0; kj < g.x.size(); ++kj) {
          const double c = -1.0 + hc * (j + 0.5 + 0.5 * g.x[kj]);
          const double wc = 0.5 * hc * g.w[kj];
          out.push_back({r, c, 2.0 * std::numbers::pi * r * r * wr * wc});
        }
      }
    }
  }
  return out;
}

struct PointEval {
  double r, c, u, ur, uth, v, grad2, uang2;
};

PointEval eval(const InitialData& d, double r, double c) {
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double rho = r * s, z = r * c;
  PointEval p{};
  p.r = r;
  p.c = c;
  p.u = d.u0(rho, z);
  const auto [g_rho, g_z] = d.grad_u0(rho, z);
  p.ur = g_rho * s + g_z * c;
  const double ang = g_rho * c - g_z * s;  // u_θ / r
  p.uth = r * ang;
  p.uang2 = ang * ang;
  p.grad2 = g_rho * g_rho + g_z * g_z;
  p.v = d.u1(rho, z);
  return p;
}

template <class F>
double integrate(const InitialData& d, double a, double b, int n_r, int n_c, F&& f) {
  double acc = 0.0;
  for (const auto& nd : nodes(a, b, n_r, n_c)) acc += nd.w * f(eval(d, nd.r, nd.c));
  return acc;
}

int base_cells(double a, double b) { return std::max(16, static_cast<int>(std::ceil((b - a) / 0.0625))); }

}  // namespace

InitialData gaussian_data(double A, double sigma, double z0, AngularProfile profile) {
  if (!std::isfinite(A) || A < 0.0) throw ConfigError("gaussian amplitude must be finite and >= 0");
  if (!(sigma > 0.0)) throw ConfigError("gaussian width must be > 0");
  InitialData d;
  d.u1 = [](double, double) { return 0.0; };
  const double s2 = sigma * sigma;
  if (profile == AngularProfile::Monopole) {
    const double R0 = std::fabs(z0) + truncation_radius_gauss(sigma);
    d.family = "monopole";
    d.support_radius = R0;
    d.radial = (z0 == 0.0);
    d.u0 = [=](double rho, double z) {
      if (rho * rho + z * z > R0 * R0) return 0.0;
      const double dz = z - z0;
      return A * std::exp(-(rho * rho + dz * dz) / s2);
    };
    d.grad_u0 = [=](double rho, double z) -> std::pair<double, double> {
      if (rho * rho + z * z > R0 * R0) return {0.0, 0.0};
      const double dz = z - z0;
      const double e = A * std::exp(-(rho * rho + dz * dz) / s2);
      return {-2.0 * rho / s2 * e, -2.0 * dz / s2 * e};
    };
  } else {
    if (z0 != 0.0) throw ConfigError("z-tilt profile is centered at the origin (offset must be 0)");
    const double R0 = truncation_radius_ztilt(sigma);
    d.family = "ztilt";
    d.support_radius = R0;
    d.radial = false;
    d.u0 = [=](double rho, double z) {
      const double r2 = rho * rho + z * z;
      if (r2 > R0 * R0) return 0.0;
      return A * (1.0 + 0.5 * z) * std::exp(-r2 / s2);
    };
    d.grad_u0 = [=](double rho, double z) -> std::pair<double, double> {
      const double r2 = rho * rho + z * z;
      if (r2 > R0 * R0) return {0.0, 0.0};
      const double e = A * std::exp(-r2 / s2);
      const double m = 1.0 + 0.5 * z;
      return {-2.0 * rho / s2 * m * e, (0.5 - 2.0 * z / s2 * m) * e};
    };
  }
  if (A == 0.0) d.support_radius = 0.0;
  return d;
}

std::vector<DataFamily> data_families() {
  return {
      {"monopole", "A·exp(-|x - z0·e_z|²/σ²), u1 = 0 (radial when z0 = 0)", {"amplitude", "sigma", "z0"}},
      {"ztilt", "A·(1 + z/2)·exp(-|x|²/σ²), u1 = 0 (axisymmetric, non-radial)", {"amplitude", "sigma"}},
  };
}

WeightedEnergyReport weighted_energies(const InitialData& d, const ProblemSpec& pr, double kappa) {
  if (kappa < 0.0) throw ConfigError("kappa must be >= 0");
  WeightedEnergyReport rep;
  rep.kappa = kappa;
  const double R0 = d.support_radius;
  if (R0 <= 0.0) return rep;
  auto run = [&](int n_r, int n_c) {
    std::array<double, 4> acc{};
    for (const auto& nd : nodes(0.0, R0, n_r, n_c)) {
      const PointEval p = eval(d, nd.r, nd.c);
      const double pot = pr.potential(p.u);
      const double e = 0.5 * p.grad2 + 0.5 * p.v * p.v + pot;
      const double Lp = p.ur + p.u / p.r + p.v;
      const double em = 0.25 * Lp * Lp + 0.25 * p.uang2 + 0.5 * pot;
      const double rk = std::pow(p.r, kappa);
      const double u2 = p.u * p.u;
      acc[0] += nd.w * e;
      acc[1] += nd.w * (1.0 + rk) * e;
      acc[2] += nd.w * rk * em;
      acc[3] += nd.w * p.r * (0.5 * p.grad2 + 0.5 * p.v * p.v + 0.25 * u2 * u2);
    }
    return acc;
  };
  const int nr = base_cells(0.0, R0);
  const int nc = d.radial ? 1 : 8;
  const auto coarse = run(nr, nc);
  const auto fine = run(2 * nr, d.radial ? 1 : 2 * nc);
  rep.E = fine[0];
  rep.E_kappa = fine[1];
  rep.K = fine[2];
  rep.E_10 = fine[3];
  double err = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double scale = std::max(std::fabs(fine[k]), 1e-300);
    if (fine[k] != 0.0 || coarse[k] != 0.0) err = std::max(err, std::fabs(fine[k] - coarse[k]) / scale);
  }
  rep.rel_error = err;
  rep.converged = err <= 1e-8;
  return rep;
}

double integrate_data(const InitialData& d, double a, double b,
                      const std::function<double(double, double, double, double, double, double)>& f) {
  if (!(b > a) || a < 0.0) throw ConfigError("integration shell needs 0 <= a < b");
  const int nc = d.radial ? 1 : 8;
  return integrate(d, a, b, base_cells(a, b), nc,
                   [&](const PointEval& p) { return f(p.r, p.c, p.u, p.ur, p.uth, p.v); });
}

OperatorIntegrals operator_integrals(const InitialData& d, double a, double b) {
  OperatorIntegrals out;
  const int nc = d.radial ? 1 : 8;
  const int nr = base_cells(a, b);
  out.L2 = integrate(d, a, b, nr, nc, [](const PointEval& p) {
    const double L = p.ur + p.u / p.r;
    return L * L;
  });
  out.ur2 = integrate(d, a, b, nr, nc, [](const PointEval& p) { return p.ur * p.ur; });
  // (1/R)∫_{|x|=R}|u|² dσ = R·2π∫|u(R,c)|² dc
  auto sphere = [&](double R) {
    if (R <= 0.0) return 0.0;
    const auto& g = quad::gauss64();
    double acc = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
      const double c = g.x[k];
      const double s = std::sqrt(1.0 - c * c);
      const double u = d.u0(R * s, R * c);
      acc += g.w[k] * u * u;
    }
    return 2.0 * std::numbers::pi * R * acc;
  };
  out.sphere_a = sphere(a);
  out.sphere_b = sphere(b);
  return out;
}

std::pair<double, double> weighted_comparison(const InitialData& d, const ProblemSpec& pr, double kappa) {
  const double R0 = d.support_radius;
  if (R0 <= 0.0) return {0.0, 0.0};
  const int nc = d.radial ? 1 : 8;
  const int nr = base_cells(0.0, R0);
  double lhs = 0.0, rhs = 0.0;
  for (const auto& nd : nodes(0.0, R0, nr, nc)) {
    const PointEval p = eval(d, nd.r, nd.c);
    const double L = p.ur + p.u / p.r;
    const double pot = pr.potential(p.u);
    const double rk = std::pow(p.r, kappa);
    lhs += nd.w * rk * (0.25 * (L + p.v) * (L + p.v) + 0.25 * (L - p.v) * (L - p.v) + 0.5 * p.uang2 + pot);
    rhs += nd.w * rk * (0.5 * p.grad2 + 0.5 * p.v * p.v + pot);
  }
  return {lhs, rhs};
}

double cutoff_profile(double x) {
  auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double s = 2.0 * x - 1.0;
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return f(s) / (f(s) + f(1.0 - s));
}

double cutoff_profile_derivative(double x) {
  const double s = 2.0 * x - 1.0;
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  const double da = a / (s * s), db = b / ((1.0 - s) * (1.0 - s));
  // ψ' = (a'·b - a·b')/(a+b)² with b' = -db; factor 2 from s = 2x - 1
  return 2.0 * (da * b + a * db) / ((a + b) * (a + b));
}

InitialData cutoff_data(const InitialData& d, double r) {
  if (!(r > 0.0)) throw ConfigError("cutoff radius must be > 0");
  InitialData out;
  out.family = d.family + "+cutoff";
  out.support_radius = d.support_radius;
  out.radial = d.radial;
  auto base_u0 = d.u0;
  auto base_grad = d.grad_u0;
  auto base_u1 = d.u1;
  out.u0 = [=](double rho, double z) { return cutoff_profile(std::hypot(rho, z) / r) * base_u0(rho, z); };
  out.u1 = [=](double rho, double z) { return cutoff_profile(std::hypot(rho, z) / r) * base_u1(rho, z); };
  out.grad_u0 = [=](double rho, double z) -> std::pair<double, double> {
    const double R = std::hypot(rho, z);
    const double phi = cutoff_profile(R / r);
    auto [g_rho, g_z] = base_grad(rho, z);
    g_rho *= phi;
    g_z *= phi;
    const double dphi = cutoff_profile_derivative(R / r) / r;
    if (dphi != 0.0 && R > 0.0) {
      const double u = base_u0(rho, z);
      g_rho += u * dphi * rho / R;
      g_z += u * dphi * z / R;
    }
    return {g_rho, g_z};
  };
  return out;
}

}  // namespace conewave
