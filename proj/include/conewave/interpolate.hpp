#pragma once

#include "conewave/state.hpp"

namespace conewave {

// Values at a point in spherical form: u, ∂ₜu, ∂ᵣu, u_θ = ∂u/∂θ.
struct PointValues {
  double u = 0.0;
  double ut = 0.0;
  double ur = 0.0;
  double uth = 0.0;
};

// Cylindrical form (Axisym2D) or radial form with u_rho = ∂ᵣu, u_z = 0 (Radial1D).
struct CylValues {
  double u = 0.0;
  double ut = 0.0;
  double u_rho = 0.0;
  double u_z = 0.0;
};

// Bilinear (linear for Radial1D) interpolation of u, ut and centered-difference
// derivatives at (ρ, z). For Radial1D, rho is the radius and z is ignored.
CylValues sample_cyl(const SimState& s, double rho, double z);

// Spatial interpolation at (r, θ) of one state; θ ignored for Radial1D.
PointValues sample(const SimState& s, double r, double theta);

// Space-time interpolation: spatial sample at the two bracketing states, linear in t.
PointValues interpolate(const SpacetimeTrace& trace, double r, double theta, double t);

// u(0, t) by even extension across the origin / axis.
double origin_value(const SimState& s);

}  // namespace conewave
