// mlferns/threading.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_THREADING_HPP
#define MLFERNS_THREADING_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mlferns {

// Runs fn(begin, end) over contiguous chunks of [0, n) on up to `threads`
// workers. Work items must be independent; the split is deterministic but
// results must not depend on it (callers pre-derive per-item RNG streams).
inline void parallel_for_ranges(std::size_t n, unsigned threads,
                                const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = threads == 0 ? 1 : std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
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

}  // namespace mlferns

#endif  // MLFERNS_THREADING_HPP
