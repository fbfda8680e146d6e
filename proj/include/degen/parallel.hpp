#ifndef DEGEN_PARALLEL_HPP
#define DEGEN_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace degen {

/// Worker cap: DEGEN_LAB_THREADS if set and positive, else hardware concurrency.
inline unsigned worker_count()
{
  if (const char* env = std::getenv("DEGEN_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(k) for k in [0, n). Iterations must be independent. The first
/// exception thrown by any iteration is rethrown on the calling thread.
template <typename Body>
void parallel_for(int n, Body&& body)
{
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(n, 0)));
  if (workers <= 1 || n < 4) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int k = static_cast<int>(w); k < n; k += static_cast<int>(workers)) body(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace degen

#endif // DEGEN_PARALLEL_HPP
