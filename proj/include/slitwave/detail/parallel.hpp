#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace slitwave::detail {

// Runs body(i) for i in [0, count) on up to `workers` threads using
// contiguous blocks. The first exception thrown (lowest block) is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t nblocks = std::min<std::size_t>(workers, count);
  std::vector<std::exception_ptr> errors(nblocks);
  std::vector<std::thread> threads;
  threads.reserve(nblocks);
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    const std::size_t lo = count * blk / nblocks;
    const std::size_t hi = count * (blk + 1) / nblocks;
    threads.emplace_back([&, lo, hi, blk] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[blk] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace slitwave::detail
