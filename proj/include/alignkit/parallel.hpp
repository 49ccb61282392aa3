#pragma once

// Deterministic data-parallel reduction over an index range.
//
// The range is cut into one contiguous chunk per worker; worker w always gets
// the same chunk for a fixed worker count, and the caller merges the returned
// accumulators in ascending worker order. Results are therefore bitwise
// reproducible for a fixed thread count.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace alignkit {

/// 0 means "use the available hardware parallelism".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs work(acc, begin, end) on each chunk and returns the accumulators in
/// worker order. make() builds a fresh accumulator per worker. The first
/// exception thrown by any worker (lowest worker index) is rethrown.
template <class Make, class Work>
auto parallel_chunks(std::size_t count, unsigned threads, Make make, Work work)
    -> std::vector<decltype(make())> {
  using Acc = decltype(make());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(resolve_threads(threads), count));
  std::vector<Acc> accs;
  accs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) accs.push_back(make());

  auto bounds = [&](std::size_t w) { return count * w / workers; };
  if (workers == 1) {
    work(accs[0], std::size_t{0}, count);
    return accs;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(accs[w], bounds(w), bounds(w + 1));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return accs;
}

}  // namespace alignkit
