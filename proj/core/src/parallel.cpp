#include "fiberld/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fiberld {
namespace {

std::atomic<int> g_thread_limit{0};

}  // namespace

void set_thread_limit(int threads) { g_thread_limit.store(std::max(0, threads)); }

int thread_limit() {
  const int limit = g_thread_limit.load();
  if (limit > 0) return limit;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  // Below this many items thread start-up dominates.
  constexpr std::size_t kMinPerWorker = 16;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_limit()),
                            std::max<std::size_t>(1, n / kMinPerWorker));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run_block = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t i = begin; i < end; ++i) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    if (begin < end) pool.emplace_back(run_block, begin, end);
  }
  run_block(0, std::min(n, block));
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fiberld
