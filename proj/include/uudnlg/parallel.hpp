#ifndef UUDNLG_PARALLEL_HPP
#define UUDNLG_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace uudnlg {

// Worker count: hardware concurrency, capped by UUDNLG_WORKERS when set.
inline std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("UUDNLG_WORKERS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return n;
}

// Applies fn to 0..count-1 over contiguous shards. Results come back in index
// order regardless of scheduling. The first exception (lowest shard) is
// rethrown after all workers finish.
template <typename Fn>
auto parallel_map(std::size_t count, Fn&& fn, std::size_t workers = worker_count())
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(count);
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t shard = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(count, (w + 1) * shard);
        for (std::size_t i = w * shard; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace uudnlg

#endif  // UUDNLG_PARALLEL_HPP
