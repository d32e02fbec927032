#include "conewave/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "conewave/errors.hpp"

namespace conewave::quad {

namespace {

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  // Boost stores the nonnegative half of the symmetric rule.
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  Rule r;
  for (std::size_t k = xs.size(); k-- > 0;) {
    if (xs[k] == 0.0) continue;
    r.x.push_back(-xs[k]);
    r.w.push_back(ws[k]);
  }
  for (std::size_t k = 0; k < xs.size(); ++k) {
    r.x.push_back(xs[k]);
    r.w.push_back(ws[k]);
  }
  return r;
}

}  // namespace

const Rule& gauss8() {
  static const Rule r = make_rule<8>();
  return r;
}

const Rule& gauss64() {
  static const Rule r = make_rule<64>();
  return r;
}

double trapezoid(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw DomainError("trapezoid: size mismatch");
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return acc;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw DomainError("trapezoid: size mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return out;
}

}  // namespace conewave::quad
