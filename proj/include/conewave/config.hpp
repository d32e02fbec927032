#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "conewave/grid.hpp"
#include "conewave/initial_data.hpp"
#include "conewave/problem.hpp"
#include "conewave/solver.hpp"

namespace conewave {

struct DiagnosticsConfig {
  bool streaming = false;  // keep only per-state series; no spacetime diagnostics
  bool ledgers = true;
  std::vector<double> cone_t0{0.0, 2.0, 5.0};
  std::vector<double> cone_r0{2.0, 5.0};
  bool slab = true;
  bool mu = true;
  std::vector<double> morawetz_R{0.5, 1.0, 2.0};
  bool weighted = true;
  bool decay = true;
  double decay_T0 = 5.0;
  double inner_c = 0.5;
  double scattering_q = 6.0;
  bool flux_bounds = true;
  double drift_tol = 1e-3;
  double decomposition_tol = 1e-3;
  double mono_tol = 1e-4;  // relative to E
};

struct RunConfig {
  ProblemSpec problem;
  std::string family = "monopole";
  double amplitude = 1.0;
  double sigma = 1.0;
  double z0 = 0.0;
  double cutoff_radius = 0.0;  // > 0 applies the smooth cutoff to the data
  Backend backend = Backend::Radial1D;
  int n_r = 1024;
  int n_rho = 128;
  int n_z = 256;
  double extent = 0.0;  // 0 → R0 + max|t| + 1
  SolverConfig solver;
  double kappa = 0.75;
  std::uint64_t seed = 0;
  std::filesystem::path output = "conewave_out";
  DiagnosticsConfig diag;
  std::string source_text;  // raw config bytes (hashed into the manifest)

  InitialData data() const;
  Grid grid(const InitialData& data) const;
  // Same config with every grid dimension multiplied by 2^level.
  RunConfig refined(int level) const;
};

// Throws ConfigError with the offending key on any invalid entry.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace conewave
