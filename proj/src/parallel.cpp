#include "nonhom/parallel.hpp"

#include <algorithm>

namespace nonhom::parallel {

namespace {
std::atomic<int> g_max_threads{0};

int effective_threads() {
  int k = g_max_threads.load();
  if (k <= 0) k = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, k);
}
}  // namespace

void set_max_threads(int k) { g_max_threads.store(k); }
int max_threads() { return effective_threads(); }

int chunk_count(std::size_t n) {
  if (n == 0) return 0;
  // Fixed grid: enough chunks to balance load at any sane thread count.
  return static_cast<int>(std::min<std::size_t>(n, 64));
}

void for_chunks(std::size_t n,
                const std::function<void(int, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const int chunks = chunk_count(n);
  // Tiny ranges run inline; spawning threads would cost more than the work.
  const int workers = n < 256 ? 1 : std::min(effective_threads(), chunks);
  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) {
      std::size_t b = n * c / chunks, e = n * (c + 1) / chunks;
      fn(c, b, e);
    }
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= chunks) break;
      std::size_t b = n * c / chunks, e = n * (c + 1) / chunks;
      fn(c, b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace nonhom::parallel
