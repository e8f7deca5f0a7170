#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace loclim {

// Number of worker threads: explicit request, else LOCLIM_THREADS, else the
// hardware count.
inline unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LOCLIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs fn(replica_index) for every index in [0, replicas).  Indices are dealt
// in chunks off a shared counter; each fn call must write only to its own
// replica's slot so that results are identical for any thread count.
template <typename Fn>
void for_each_replica(std::uint64_t replicas, unsigned threads, Fn&& fn) {
  if (replicas == 0) return;
  if (threads <= 1 || replicas == 1) {
    for (std::uint64_t i = 0; i < replicas; ++i) fn(i);
    return;
  }
  constexpr std::uint64_t kChunk = 16;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t base = next.fetch_add(kChunk, std::memory_order_relaxed);
      if (base >= replicas) return;
      const std::uint64_t end = std::min(replicas, base + kChunk);
      try {
        for (std::uint64_t i = base; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = std::min<std::uint64_t>(threads, replicas);
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace loclim
