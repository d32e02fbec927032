#include "conewave/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace conewave {

int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int want = hw;
  if (const char* env = std::getenv("CONEWAVE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) want = v;
    } catch (...) {
    }
  }
  return std::max(1, std::min(want, hw));
}

void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(1, chunk);
  const int nt = thread_count();
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  if (nt <= 1 || nchunks <= 1) {
    body(0, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(nt), nchunks);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < nchunks; c += workers) {
        body(c * chunk, std::min(n, (c + 1) * chunk));
      }
    });
  }
}

}  // namespace conewave
