#include "conewave/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "conewave/errors.hpp"
#include "conewave/parallel.hpp"
#include "conewave/quadrature.hpp"

namespace conewave {

namespace {

constexpr double kPi = std::numbers::pi;

inline double ghost_r(const std::vector<double>& f, int n, int i) {
  if (i < 0) i = -1 - i;
  return i < n ? f[static_cast<std::size_t>(i)] : 0.0;
}

inline double ghost_a(const std::vector<double>& f, const Grid& g, int i, int j) {
  if (i < 0) i = -1 - i;
  if (i >= g.n_rho || j < 0 || j >= g.n_z) return 0.0;
  return f[g.idx(i, j)];
}

CellData cell_at(const SimState& s, std::size_t k) {
  const Grid& g = s.grid;
  CellData c;
  if (g.radial()) {
    const int i = static_cast<int>(k);
    c.r = g.r(i);
    c.u = s.u[k];
    c.ut = s.ut[k];
    c.ur = (ghost_r(s.u, g.n_r, i + 1) - ghost_r(s.u, g.n_r, i - 1)) / (2.0 * g.dr);
    c.grad2 = c.ur * c.ur;
    return c;
  }
  const int i = static_cast<int>(k % static_cast<std::size_t>(g.n_rho));
  const int j = static_cast<int>(k / static_cast<std::size_t>(g.n_rho));
  CylValues v;
  v.u = s.u[k];
  v.ut = s.ut[k];
  v.u_rho = (ghost_a(s.u, g, i + 1, j) - ghost_a(s.u, g, i - 1, j)) / (2.0 * g.drho);
  v.u_z = (ghost_a(s.u, g, i, j + 1) - ghost_a(s.u, g, i, j - 1)) / (2.0 * g.dz);
  return point_data(v, g.rho(i), g.z(j), false);
}

// ∫ dz ln(a² + z²)
double log_antiderivative(double a, double z) {
  if (z == 0.0) return 0.0;
  if (a == 0.0) return z * std::log(z * z) - 2.0 * z;
  return z * std::log(a * a + z * z) - 2.0 * z + 2.0 * a * std::atan(z / a);
}

// ∫_cell dx/|x|² for the ring cell [ρa, ρb] × [za, zb].
double exact_inv_r2(double ra, double rb, double za, double zb) {
  auto G = [&](double a) { return log_antiderivative(a, zb) - log_antiderivative(a, za); };
  return kPi * (G(rb) - G(ra));
}

struct CellWeight {
  double vol = 0.0;  // ∫ dx over the part inside the shells
  double inv = 0.0;  // ∫ dx/|x|² over the same part
};

bool all_space(std::span<const Interval> shells) {
  return shells.size() == 1 && shells[0].a <= 0.0 && !std::isfinite(shells[0].b);
}

CellWeight radial_weight(const Grid& g, int i, std::span<const Interval> shells) {
  const double lo = i * g.dr, hi = (i + 1) * g.dr;
  CellWeight w;
  for (const auto& sh : shells) {
    const double a = std::max(lo, sh.a), b = std::min(hi, sh.b);
    if (b <= a) continue;
    w.vol += 4.0 * kPi / 3.0 * (b * b * b - a * a * a);
    w.inv += 4.0 * kPi * (b - a);
  }
  return w;
}

CellWeight axisym_weight(const Grid& g, int i, int j, std::span<const Interval> shells, bool whole) {
  const double ra = i * g.drho, rb = (i + 1) * g.drho;
  const double za = -g.Z_max + j * g.dz, zb = za + g.dz;
  const double vol = kPi * (rb * rb - ra * ra) * g.dz;
  const double zc = 0.5 * (za + zb);
  const double r_mid2 = g.rho(i) * g.rho(i) + zc * zc;
  const double znear = (za <= 0.0 && zb >= 0.0) ? 0.0 : std::min(std::fabs(za), std::fabs(zb));
  const double r_min = std::hypot(ra, znear);
  const double r_max = std::hypot(rb, std::max(std::fabs(za), std::fabs(zb)));
  const bool near = r_min < 32.0 * g.h();
  const double inv_full = near ? exact_inv_r2(ra, rb, za, zb) : vol / r_mid2;
  if (whole) return {vol, inv_full};

  CellWeight w;
  bool cut = false;
  for (const auto& sh : shells) {
    if (r_min >= sh.a && r_max <= sh.b) return {vol, inv_full};
    if (r_max <= sh.a || r_min >= sh.b) continue;
    cut = true;
  }
  if (!cut) return w;
  // ρ-weighted 8×8 subsampling of the cut cell
  constexpr int m = 8;
  double v_in = 0.0, i_in = 0.0, i_all = 0.0;
  for (int a = 0; a < m; ++a) {
    const double rho = ra + (a + 0.5) * (rb - ra) / m;
    const double dv = 2.0 * kPi * rho * (rb - ra) / m * g.dz / m;
    for (int b = 0; b < m; ++b) {
      const double z = za + (b + 0.5) * g.dz / m;
      const double r = std::hypot(rho, z);
      const double di = dv / (r * r);
      i_all += di;
      for (const auto& sh : shells) {
        if (r > sh.a && r < sh.b) {
          v_in += dv;
          i_in += di;
          break;
        }
      }
    }
  }
  w.vol = v_in;
  w.inv = i_all > 0.0 ? inv_full * (i_in / i_all) : 0.0;
  return w;
}

template <std::size_t K, class F>
std::array<double, K> accumulate(const SimState& s, std::span<const Interval> shells, F&& f) {
  const Grid& g = s.grid;
  const bool whole = all_space(shells);
  const std::size_t rows = g.radial() ? (g.size() + 255) / 256 : static_cast<std::size_t>(g.n_z);
  std::vector<std::array<double, K>> partial(rows);
  parallel_for(rows, 4, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t row = r0; row < r1; ++row) {
      std::array<double, K> acc{};
      auto add = [&](std::size_t k, const CellWeight& w) {
        if (w.vol == 0.0 && w.inv == 0.0) return;
        const CellData c = cell_at(s, k);
        const std::array<Density, K> d = f(c);
        const double u2 = c.u * c.u;
        for (std::size_t q = 0; q < K; ++q) acc[q] += d[q].regular * w.vol + d[q].inv_r2_coef * u2 * w.inv;
      };
      if (g.radial()) {
        const std::size_t end = std::min(g.size(), (row + 1) * 256);
        for (std::size_t k = row * 256; k < end; ++k) {
          const int i = static_cast<int>(k);
          add(k, whole ? CellWeight{4.0 * kPi / 3.0 * (std::pow((i + 1) * g.dr, 3) - std::pow(i * g.dr, 3)),
                                    4.0 * kPi * g.dr}
                       : radial_weight(g, i, shells));
        }
      } else {
        const int j = static_cast<int>(row);
        for (int i = 0; i < g.n_rho; ++i) add(g.idx(i, j), axisym_weight(g, i, j, shells, whole));
      }
      partial[row] = acc;
    }
  });
  std::array<double, K> total{};
  for (const auto& p : partial)
    for (std::size_t q = 0; q < K; ++q) total[q] += p[q];
  return total;
}

void check_annulus(const SimState& s, double r1, double r2) {
  if (!(r1 >= 0.0) || !(r2 > r1)) throw DomainError("invalid annulus: need 0 <= r1 < r2");
  const Grid& g = s.grid;
  const double extent = g.radial() ? g.R_max : std::hypot(g.P_max, g.Z_max);
  if (std::isfinite(r2) && r2 > extent * (1.0 + 1e-12)) throw DomainError("annulus exceeds the grid");
}

}  // namespace

CellData point_data(const CylValues& v, double rho, double z, bool radial) {
  CellData c;
  c.u = v.u;
  c.ut = v.ut;
  if (radial) {
    c.r = rho;
    c.ur = v.u_rho;
    c.grad2 = c.ur * c.ur;
    return c;
  }
  c.r = std::hypot(rho, z);
  const double st = c.r > 0.0 ? rho / c.r : 1.0;
  const double ct = c.r > 0.0 ? z / c.r : 0.0;
  c.ur = v.u_rho * st + v.u_z * ct;
  const double ang = v.u_rho * ct - v.u_z * st;
  c.uang2 = ang * ang;
  c.grad2 = v.u_rho * v.u_rho + v.u_z * v.u_z;
  return c;
}

std::vector<CellData> cell_data(const SimState& s) {
  std::vector<CellData> out(s.grid.size());
  parallel_for(out.size(), 1 << 14, [&](std::size_t k0, std::size_t k1) {
    for (std::size_t k = k0; k < k1; ++k) out[k] = cell_at(s, k);
  });
  return out;
}

std::vector<double> apply_L(const SimState& s) {
  std::vector<double> out(s.grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cell_at(s, k).Lu();
  return out;
}

std::pair<std::vector<double>, std::vector<double>> apply_Lpm(const SimState& s) {
  std::vector<double> plus(s.grid.size()), minus(s.grid.size());
  for (std::size_t k = 0; k < plus.size(); ++k) {
    const CellData c = cell_at(s, k);
    plus[k] = c.Lu() + c.ut;
    minus[k] = c.Lu() - c.ut;
  }
  return {std::move(plus), std::move(minus)};
}

std::vector<double> slashed_grad_sq(const SimState& s) {
  std::vector<double> out(s.grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cell_at(s, k).uang2;
  return out;
}

Density density(const CellData& c, const ProblemSpec& pr, DensityKind kind) {
  const double pot = pr.potential(c.u);
  switch (kind) {
    case DensityKind::Full:
      return {0.5 * c.grad2 + 0.5 * c.ut * c.ut + pot, 0.0};
    case DensityKind::Inward: {
      // ¼(∂ᵣu + ∂ₜu + u/r)² expanded so the u²/r² part is integrated exactly
      const double a = c.ur + c.ut;
      return {0.25 * a * a + 0.5 * a * c.u / c.r + 0.25 * c.uang2 + 0.5 * pot, 0.25};
    }
    case DensityKind::Outward: {
      const double a = c.ur - c.ut;
      return {0.25 * a * a + 0.5 * a * c.u / c.r + 0.25 * c.uang2 + 0.5 * pot, 0.25};
    }
    case DensityKind::Potential:
      return {pot, 0.0};
    case DensityKind::Angular:
      return {0.5 * c.uang2, 0.0};
  }
  return {};
}

Energies energies(const SimState& s, double r1, double r2) {
  check_annulus(s, r1, r2);
  const Interval sh{r1, r2};
  const ProblemSpec& pr = s.problem;
  const auto v = accumulate<3>(s, std::span<const Interval>(&sh, 1), [&](const CellData& c) {
    return std::array<Density, 3>{density(c, pr, DensityKind::Full), density(c, pr, DensityKind::Inward),
                                  density(c, pr, DensityKind::Outward)};
  });
  return {v[0], v[1], v[2]};
}

Energies energies(const SimState& s) { return energies(s, 0.0, std::numeric_limits<double>::infinity()); }

std::pair<double, double> grid_operator_integrals(const SimState& s, double r1, double r2) {
  check_annulus(s, r1, r2);
  const Interval sh{r1, r2};
  const auto v = accumulate<2>(s, std::span<const Interval>(&sh, 1), [](const CellData& c) {
    return std::array<Density, 2>{Density{c.ur * c.ur + 2.0 * c.ur * c.u / c.r, 1.0}, Density{c.ur * c.ur, 0.0}};
  });
  return {v[0], v[1]};
}

double integrate_shells(const SimState& s, std::span<const Interval> shells,
                        const std::function<Density(const CellData&)>& f) {
  if (shells.empty()) return 0.0;
  return accumulate<1>(s, shells, [&](const CellData& c) { return std::array<Density, 1>{f(c)}; })[0];
}

double integrate_sphere(const SimState& s, double R, const std::function<double(const CellData&)>& f) {
  if (!(R > 0.0)) throw DomainError("sphere radius must be positive");
  if (s.grid.radial()) {
    const CellData c = point_data(sample_cyl(s, R, 0.0), R, 0.0, true);
    return 4.0 * kPi * R * R * f(c);
  }
  const auto& g = quad::gauss64();
  double acc = 0.0;
  for (std::size_t k = 0; k < g.x.size(); ++k) {
    const double ct = g.x[k];
    const double st = std::sqrt(1.0 - ct * ct);
    const double rho = R * st, z = R * ct;
    acc += g.w[k] * f(point_data(sample_cyl(s, rho, z), rho, z, false));
  }
  return 2.0 * kPi * R * R * acc;
}

double sphere_u2(const SimState& s, double R) {
  return integrate_sphere(s, R, [](const CellData& c) { return c.u * c.u; });
}

}  // namespace conewave
