// parallel.hpp - optional data parallelism with bit-stable results. Work is
// split into a fixed number of chunks independent of the thread count, and
// reductions combine per-chunk partials in chunk order, so sums are identical
// for any --threads value.
#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

#include "dplab/core.hpp"

namespace dplab {

inline int& thread_budget() {
  static int budget = 1;
  return budget;
}

inline void set_thread_budget(int k) { thread_budget() = std::max(1, k); }

inline constexpr long kReductionChunks = 256;

// f(chunk_id, begin, end) over [0,count) split into kReductionChunks ranges.
inline void for_each_chunk(long count, const std::function<void(long, long, long)>& f) {
  if (count <= 0) return;
  const long chunks = std::min<long>(kReductionChunks, count);
  const int threads = std::min<int>(thread_budget(), int(chunks));
  auto run_range = [&](long c0, long c1) {
    for (long c = c0; c < c1; ++c) {
      const long b = count * c / chunks;
      const long e = count * (c + 1) / chunks;
      f(c, b, e);
    }
  };
  if (threads <= 1) {
    run_range(0, chunks);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(size_t(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const long c = next.fetch_add(1);
        if (c >= chunks) return;
        run_range(c, c + 1);
      }
    });
  }
  for (auto& th : pool) th.join();
}

// Deterministic sum of term(i) over [0,count): per-chunk serial partials
// combined in fixed chunk order.
inline double deterministic_sum(long count, const std::function<double(long)>& term) {
  if (count <= 0) return 0.0;
  const long chunks = std::min<long>(kReductionChunks, count);
  std::vector<double> partial(size_t(chunks), 0.0);
  for_each_chunk(count, [&](long c, long b, long e) {
    double s = 0.0;
    for (long i = b; i < e; ++i) s += term(i);
    partial[size_t(c)] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace dplab
