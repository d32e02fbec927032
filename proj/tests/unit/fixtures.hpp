#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <tuple>

#include "conewave/initial_data.hpp"
#include "conewave/solver.hpp"

namespace fixtures {

using namespace conewave;

inline InitialData gauss() { return gaussian_data(1.0, 1.0, 0.0, AngularProfile::Monopole); }
inline InitialData ztilt() { return gaussian_data(1.0, 1.0, 0.0, AngularProfile::ZTilt); }

// Radial Gaussian run with extent R0 + max|t| + 1; cached per parameter set.
inline const EvolveResult& radial_run(int n_r, double T, double coupling = 1.0, double t_start = 0.0,
                                      double amplitude = 1.0) {
  static std::map<std::tuple<int, double, double, double, double>, std::unique_ptr<EvolveResult>> cache;
  auto& slot = cache[{n_r, T, coupling, t_start, amplitude}];
  if (!slot) {
    const InitialData d = gaussian_data(amplitude, 1.0, 0.0, AngularProfile::Monopole);
    SolverConfig cfg;
    cfg.T_end = T;
    cfg.t_start = t_start;
    const Grid g = Grid::radial(causal_radius(d, cfg) + 1.0, n_r);
    slot = std::make_unique<EvolveResult>(evolve(d, ProblemSpec::make(3.0, coupling), g, cfg));
  }
  return *slot;
}

inline const EvolveResult& axisym_run(const InitialData& d, int n_rho, double T, const std::string& key) {
  static std::map<std::tuple<std::string, int, double>, std::unique_ptr<EvolveResult>> cache;
  auto& slot = cache[{key, n_rho, T}];
  if (!slot) {
    SolverConfig cfg;
    cfg.T_end = T;
    const double L = causal_radius(d, cfg) + 1.0;
    const Grid g = Grid::axisym(L, L, n_rho, 2 * n_rho);
    slot = std::make_unique<EvolveResult>(evolve(d, ProblemSpec::make(3.0), g, cfg));
  }
  return *slot;
}

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace fixtures
