#pragma once

#include <span>
#include <vector>

namespace conewave::quad {

// Gauss–Legendre nodes/weights on [-1, 1].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};
const Rule& gauss8();
const Rule& gauss64();

// Trapezoid rule over samples (t_k, f_k).
double trapezoid(std::span<const double> t, std::span<const double> f);
// Running trapezoid integral, same length as t (starts at 0).
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> f);

}  // namespace conewave::quad
