#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace semgeo {

/// Worker-thread settings shared by the numeric stages. Results never
/// depend on `threads`: work is split into fixed-size chunks whose
/// boundaries depend only on the problem size.
struct Execution {
  std::size_t threads = 1;  // 0 = hardware concurrency

  std::size_t resolved_threads() const {
    if (threads != 0) return threads;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
};

inline constexpr std::size_t kRowChunk = 32;

/// Calls body(begin, end) for consecutive ranges of `chunk` indices.
/// Chunks are claimed dynamically; each range is visited exactly once.
template <class Body>
void parallel_for_chunks(std::size_t n, std::size_t chunk, const Execution& ex, Body&& body) {
  if (n == 0) return;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t workers = std::min(ex.resolved_threads(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

template <class Body>
void parallel_for_rows(std::size_t n, const Execution& ex, Body&& body) {
  parallel_for_chunks(n, kRowChunk, ex, std::forward<Body>(body));
}

/// Deterministic sum: per-chunk partials are combined in chunk order.
template <class Term>
double parallel_sum(std::size_t n, const Execution& ex, Term&& term) {
  const std::size_t chunks = (n + kRowChunk - 1) / kRowChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for_chunks(n, kRowChunk, ex, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += term(i);
    partial[b / kRowChunk] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace semgeo
