#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trimlab {

// Replication-level work is cut into fixed-size chunks that workers claim
// from a shared counter. Chunk boundaries depend on `total` only, and every
// result is written to a slot owned by its replication index, so outputs do
// not depend on the number of workers or on scheduling order.
inline constexpr std::int64_t kChunkSize = 1024;

inline unsigned resolve_workers(unsigned requested) noexcept {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(begin, end) for consecutive replication ranges covering
// [0, total). The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_chunks(std::int64_t total, unsigned workers, Body&& body) {
  if (total <= 0) return;
  const std::int64_t chunks = (total + kChunkSize - 1) / kChunkSize;
  const auto threads = static_cast<unsigned>(std::min<std::int64_t>(resolve_workers(workers), chunks));
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) return;
      try {
        body(c * kChunkSize, std::min(total, (c + 1) * kChunkSize));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  if (threads <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace trimlab
