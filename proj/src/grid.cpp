#include "conewave/grid.hpp"

#include <algorithm>
#include <cmath>

#include "conewave/errors.hpp"

namespace conewave {

std::string to_string(Backend b) { return b == Backend::Radial1D ? "radial1d" : "axisym2d"; }

Grid Grid::radial(double R_max, int n_r) {
  if (!(R_max > 0.0) || n_r < 4) throw ConfigError("radial grid needs R_max > 0 and n_r >= 4");
  Grid g;
  g.backend = Backend::Radial1D;
  g.R_max = R_max;
  g.n_r = n_r;
  g.dr = R_max / n_r;
  return g;
}

Grid Grid::axisym(double P_max, double Z_max, int n_rho, int n_z) {
  if (!(P_max > 0.0) || !(Z_max > 0.0) || n_rho < 4 || n_z < 4)
    throw ConfigError("axisymmetric grid needs positive extents and at least 4 cells per direction");
  Grid g;
  g.backend = Backend::Axisym2D;
  g.P_max = P_max;
  g.Z_max = Z_max;
  g.n_rho = n_rho;
  g.n_z = n_z;
  g.drho = P_max / n_rho;
  g.dz = 2.0 * Z_max / n_z;
  return g;
}

double Grid::h() const { return radial() ? dr : std::min(drho, dz); }

double Grid::reach() const {
  if (radial()) return (n_r - 1.5) * dr;
  return std::min(P_max - 1.5 * drho, Z_max - 1.5 * dz);
}

}  // namespace conewave
