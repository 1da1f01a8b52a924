#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tracefn {

/// Worker-count setting shared by the parallel scans. 0 means "use the
/// hardware concurrency".
struct Parallelism {
  unsigned threads = 1;

  unsigned resolved() const {
    if (threads != 0) return threads;
    return std::max(1U, std::thread::hardware_concurrency());
  }
};

/// Runs body(begin, end) over static contiguous chunks of [0, count).
/// Chunk boundaries depend only on count and the thread count; callers write
/// into per-index slots and reduce sequentially afterwards, so results do not
/// depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, Parallelism par, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(par.resolved(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tracefn
