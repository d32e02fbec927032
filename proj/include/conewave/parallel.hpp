#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace conewave {

// Worker count: CONEWAVE_THREADS (if set and positive) capped by the hardware.
int thread_count();

// Runs body(begin, end) over [0, n) split into fixed chunks; serial when one thread.
void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body);

// Sum of f(i) over [0, n). Chunk partials are combined in chunk order, so the result
// does not depend on the thread count.
template <class F>
double deterministic_sum(std::size_t n, F&& f, std::size_t chunk = 4096) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(nchunks, 1, [&](std::size_t c0, std::size_t c1) {
    for (std::size_t c = c0; c < c1; ++c) {
      double acc = 0.0;
      const std::size_t end = std::min(n, (c + 1) * chunk);
      for (std::size_t i = c * chunk; i < end; ++i) acc += f(i);
      partial[c] = acc;
    }
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace conewave
