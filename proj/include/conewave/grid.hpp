#pragma once

#include <cstddef>
#include <string>

namespace conewave {

enum class Backend { Radial1D, Axisym2D };

std::string to_string(Backend b);

// Cell-centered grid. Radial1D: r_i = (i+½)dr on [0, R_max].
// Axisym2D: ρ_i = (i+½)dρ on [0, P_max], z_j = -Z_max + (j+½)dz; storage is z-major (ρ contiguous).
struct Grid {
  Backend backend = Backend::Radial1D;
  double R_max = 0.0;
  int n_r = 0;
  double dr = 0.0;
  double P_max = 0.0;
  double Z_max = 0.0;
  int n_rho = 0;
  int n_z = 0;
  double drho = 0.0;
  double dz = 0.0;

  static Grid radial(double R_max, int n_r);
  static Grid axisym(double P_max, double Z_max, int n_rho, int n_z);

  bool radial() const { return backend == Backend::Radial1D; }
  std::size_t size() const {
    return radial() ? static_cast<std::size_t>(n_r)
                    : static_cast<std::size_t>(n_rho) * static_cast<std::size_t>(n_z);
  }
  double r(int i) const { return (i + 0.5) * dr; }
  double rho(int i) const { return (i + 0.5) * drho; }
  double z(int j) const { return -Z_max + (j + 0.5) * dz; }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_rho) + static_cast<std::size_t>(i);
  }
  // Smallest spacing; the "h" of refinement studies.
  double h() const;
  // Largest spherical radius at which values and derivatives can be interpolated.
  double reach() const;

  bool operator==(const Grid&) const = default;
};

}  // namespace conewave
