#pragma once

#include <functional>
#include <vector>

#include "conewave/grid.hpp"
#include "conewave/initial_data.hpp"
#include "conewave/problem.hpp"
#include "conewave/state.hpp"

namespace conewave {

struct SolverConfig {
  double cfl = 0.5;
  double T_end = 0.0;
  double t_start = 0.0;    // < 0 also evolves backward to t_start
  int store_stride = 0;    // 0 → backend default (1 radial, 4 axisym)
  int energy_stride = 0;   // 0 → every step (radial) or every stored step (axisym)
  bool keep_trace = true;  // false: only the last state is kept (observer sees every stored state)
};

struct EnergyDriftReport {
  // Staggered leapfrog energy, sampled at half steps t_n - dt/2 (a single t = 0 entry when no
  // step is taken).
  std::vector<double> t;
  std::vector<double> E;
  double max_rel_drift = 0.0;
  double h = 0.0;
  double dt = 0.0;
};

struct EvolveResult {
  SpacetimeTrace trace;
  EnergyDriftReport energy;
};

// Time step for the grid and CFL fraction (before adjustment to land on T_end).
double max_time_step(const Grid& g, double cfl);

// Semi-discrete Hamiltonian of the stored level (the staggered series starts within O(dt²) of it).
double discrete_energy(const SimState& s);

// One velocity-Verlet (leapfrog) step; the state carries ∂ₜu at integer levels.
void step_radial(SimState& s, double dt);
void step_axisym(SimState& s, double dt);

// Samples the data on the grid (hard truncation beyond R0).
SimState initial_state(const InitialData& data, const ProblemSpec& problem, const Grid& grid);

// Smallest grid extent satisfying causal sizing for the run.
double causal_radius(const InitialData& data, const SolverConfig& cfg);

EvolveResult evolve(const InitialData& data, const ProblemSpec& problem, const Grid& grid,
                    const SolverConfig& cfg,
                    const std::function<void(const SimState&)>& on_store = {});

}  // namespace conewave
