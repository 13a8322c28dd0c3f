// SPDX-License-Identifier: Apache-2.0
#include "wnls/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace wnls::parallel {
namespace {

std::atomic<unsigned> g_override{0};

// Below this many chunks the thread start-up cost dominates.
constexpr std::size_t kMinChunksForThreads = 16;

unsigned env_threads() {
  static const unsigned value = [] {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WNLS_THREADS")) {
      try {
        const long requested = std::stol(env);
        if (requested >= 1) return std::min<unsigned>(static_cast<unsigned>(requested), hw);
      } catch (...) {
      }
    }
    return hw;
  }();
  return value;
}

void run_chunks(std::size_t chunks, const std::function<void(std::size_t)>& job) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
  if (workers <= 1 || chunks < kMinChunksForThreads) {
    for (std::size_t c = 0; c < chunks; ++c) job(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) job(c);
    });
  }
}

}  // namespace

unsigned thread_count() {
  const unsigned o = g_override.load();
  return o != 0 ? o : env_threads();
}

void set_thread_count(unsigned threads) { g_override.store(threads); }

void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  run_chunks(chunks, [&](std::size_t c) { body(c * kChunk, std::min(n, (c + 1) * kChunk)); });
}

double chunked_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partials(chunks, 0.0);
  run_chunks(chunks, [&](std::size_t c) {
    partials[c] = partial(c * kChunk, std::min(n, (c + 1) * kChunk));
  });
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

}  // namespace wnls::parallel
