#include "lmfmm/core.hpp"

#include <atomic>

namespace lmfmm {

namespace {
int g_threads = 0;  // 0 = not set yet
}

int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : int(n);
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }

int thread_count() { return g_threads > 0 ? g_threads : hardware_threads(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  int nt = thread_count();
  if (nt <= 1 || n < 2) {
    body(0, n);
    return;
  }
  std::size_t nblk = std::min<std::size_t>(n, std::size_t(nt));
  std::size_t chunk = (n + nblk - 1) / nblk;
  std::vector<std::thread> pool;
  pool.reserve(nblk);
  for (std::size_t b = 0; b < nblk; ++b) {
    std::size_t lo = b * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lmfmm
