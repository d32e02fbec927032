#pragma once

#include <cstddef>
#include <vector>

#include "conewave/grid.hpp"
#include "conewave/problem.hpp"

namespace conewave {

struct SimState {
  std::vector<double> u;
  std::vector<double> ut;
  double t = 0.0;
  Grid grid;
  ProblemSpec problem;

  static SimState zeros(const Grid& g, const ProblemSpec& pr, double t = 0.0);
  // Throws RuntimeAbort on NaN/Inf or shape mismatch.
  void check() const;
};

// Time-ordered states with uniform spacing; linear interpolation in time.
class SpacetimeTrace {
 public:
  SpacetimeTrace() = default;
  SpacetimeTrace(Grid g, ProblemSpec pr, int store_stride, double dt_step);

  void append(SimState s);

  const Grid& grid() const { return grid_; }
  const ProblemSpec& problem() const { return problem_; }
  int store_stride() const { return stride_; }
  double dt_step() const { return dt_step_; }
  double spacing() const { return stride_ * dt_step_; }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  const SimState& operator[](std::size_t j) const { return states_[j]; }
  const std::vector<SimState>& states() const { return states_; }
  double t_first() const;
  double t_last() const;
  bool contains(double t) const;

  struct Bracket {
    std::size_t j = 0;  // left state
    double w = 0.0;     // weight of state j+1
  };
  // Throws DomainError outside [t_first, t_last].
  Bracket locate(double t) const;
  // Interpolated full state (copy).
  SimState state_at(double t) const;
  // {t1} ∪ stored times strictly inside (t1, t2) ∪ {t2}.
  std::vector<double> sample_times(double t1, double t2) const;

 private:
  Grid grid_;
  ProblemSpec problem_;
  int stride_ = 1;
  double dt_step_ = 0.0;
  std::vector<SimState> states_;
};

}  // namespace conewave
