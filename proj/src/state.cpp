#include "conewave/state.hpp"

#include <cmath>
#include <string>

#include "conewave/errors.hpp"

namespace conewave {

SimState SimState::zeros(const Grid& g, const ProblemSpec& pr, double t) {
  SimState s;
  s.u.assign(g.size(), 0.0);
  s.ut.assign(g.size(), 0.0);
  s.t = t;
  s.grid = g;
  s.problem = pr;
  return s;
}

void SimState::check() const {
  if (u.size() != grid.size() || ut.size() != grid.size())
    throw RuntimeAbort("state shape does not match grid");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(ut[i]))
      throw RuntimeAbort("non-finite sample at cell " + std::to_string(i) + ", t = " + std::to_string(t));
  }
}

SpacetimeTrace::SpacetimeTrace(Grid g, ProblemSpec pr, int store_stride, double dt_step)
    : grid_(g), problem_(pr), stride_(store_stride), dt_step_(dt_step) {
  if (store_stride < 1) throw ConfigError("store stride must be >= 1");
  if (!(dt_step > 0.0)) throw ConfigError("time step must be positive");
}

void SpacetimeTrace::append(SimState s) {
  if (!(s.grid == grid_)) throw DomainError("state grid differs from trace grid");
  if (!states_.empty()) {
    const double expect = states_.back().t + spacing();
    if (std::fabs(s.t - expect) > 1e-9 * std::max(1.0, std::fabs(expect)))
      throw DomainError("trace states must be uniformly spaced in time");
  }
  states_.push_back(std::move(s));
}

double SpacetimeTrace::t_first() const {
  if (states_.empty()) throw DomainError("empty trace");
  return states_.front().t;
}

double SpacetimeTrace::t_last() const {
  if (states_.empty()) throw DomainError("empty trace");
  return states_.back().t;
}

bool SpacetimeTrace::contains(double t) const {
  if (states_.empty()) return false;
  const double eps = 1e-10 * std::max(1.0, std::fabs(t));
  return t >= t_first() - eps && t <= t_last() + eps;
}

SpacetimeTrace::Bracket SpacetimeTrace::locate(double t) const {
  if (!contains(t)) throw DomainError("time " + std::to_string(t) + " outside trace window");
  if (states_.size() == 1) return {0, 0.0};
  const double x = (t - t_first()) / spacing();
  const auto last = static_cast<double>(states_.size() - 1);
  if (x <= 0.0) return {0, 0.0};
  if (x >= last) return {states_.size() - 2, 1.0};
  const double fl = std::floor(x);
  auto j = static_cast<std::size_t>(fl);
  double w = x - fl;
  // snap values within round-off of a stored time
  if (w < 1e-9) w = 0.0;
  if (w > 1.0 - 1e-9) { ++j; w = 0.0; }
  if (j >= states_.size() - 1) return {states_.size() - 2, 1.0};
  return {j, w};
}

SimState SpacetimeTrace::state_at(double t) const {
  const auto br = locate(t);
  if (br.w == 0.0) return states_[br.j];
  if (br.w == 1.0) return states_[br.j + 1];
  const SimState& a = states_[br.j];
  const SimState& b = states_[br.j + 1];
  SimState s = SimState::zeros(grid_, problem_, t);
  const double wa = 1.0 - br.w;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    s.u[i] = wa * a.u[i] + br.w * b.u[i];
    s.ut[i] = wa * a.ut[i] + br.w * b.ut[i];
  }
  return s;
}

std::vector<double> SpacetimeTrace::sample_times(double t1, double t2) const {
  if (!(t2 >= t1)) throw DomainError("sample window reversed");
  locate(t1);
  locate(t2);
  std::vector<double> out{t1};
  if (t2 == t1) return out;
  const double eps = 1e-9 * spacing();
  for (const auto& s : states_) {
    if (s.t > t1 + eps && s.t < t2 - eps) out.push_back(s.t);
  }
  out.push_back(t2);
  return out;
}

}  // namespace conewave
