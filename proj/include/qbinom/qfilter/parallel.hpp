#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qbinom::qfilter {

// Calls fn(i) for every i in [0, n) using up to `workers` threads. Work items must
// write only to their own slots; the first exception thrown is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, workers), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Pairwise tree reduction over items[lo, hi); the tree shape depends only on the item count.
template <class T, class Merge>
T pairwise_reduce(const std::vector<T>& items, std::size_t lo, std::size_t hi, Merge& merge) {
  if (hi - lo == 1) return items[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(pairwise_reduce(items, lo, mid, merge), pairwise_reduce(items, mid, hi, merge));
}

inline constexpr std::size_t kPathBlock = 256;

// Deterministic map-reduce over n paths: paths are folded into fixed blocks of
// kPathBlock in index order, and the block results are merged by a fixed pairwise tree.
// The result is bit-identical for any worker count.
template <class Acc, class AddPath, class Merge>
Acc reduce_paths(std::size_t n, unsigned workers, const Acc& zero, AddPath add_path, Merge merge) {
  if (n == 0) return zero;
  const std::size_t blocks = (n + kPathBlock - 1) / kPathBlock;
  std::vector<Acc> partial(blocks, zero);
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kPathBlock);
    for (std::size_t p = b * kPathBlock; p < end; ++p) add_path(p, partial[b]);
  });
  return pairwise_reduce(partial, 0, blocks, merge);
}

inline std::vector<double> add_vectors(std::vector<double> a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace qbinom::qfilter
