#include "conewave/problem.hpp"

#include "conewave/errors.hpp"

namespace conewave {

ProblemSpec ProblemSpec::make(double p, double coupling) {
  if (!(p >= 3.0 && p <= 5.0)) throw ConfigError("p must satisfy 3 <= p <= 5");
  if (coupling < 0.0) throw ConfigError("focusing nonlinearity is not supported");
  if (coupling != 0.0 && coupling != 1.0) throw ConfigError("coupling must be 1 (defocusing) or 0 (linear)");
  return ProblemSpec{p, coupling};
}

}  // namespace conewave
