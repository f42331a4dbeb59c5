#pragma once

// Minimal data-parallel helper.  Work is split into contiguous index blocks,
// one per worker, so the assignment of items to workers is a pure function
// of (n, num_threads) — no work stealing, no scheduling nondeterminism.
// Callers must keep per-item computations independent; anything order
// sensitive (reductions across items) belongs in a fixed-order merge after
// the join.

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace graphssl {

inline unsigned hardware_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs fn(begin, end) over a partition of [0, n) using at most `threads`
// workers (the calling thread counts as one).  fn must be thread-safe.
// Exceptions thrown by workers are rethrown on the calling thread.
inline void parallel_blocks(
    std::int64_t n, unsigned threads,
    const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  unsigned workers = threads == 0 ? hardware_threads() : threads;
  if (static_cast<std::int64_t>(workers) > n) {
    workers = static_cast<unsigned>(n);
  }
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  const std::int64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) return;
    try {
      fn(begin, end);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Runs fn(item) for every item in [0, n) under the same block partition.
inline void parallel_for(std::int64_t n, unsigned threads,
                         const std::function<void(std::int64_t)>& fn) {
  parallel_blocks(n, threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace graphssl
