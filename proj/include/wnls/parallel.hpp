// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace wnls::parallel {

/// Elements per reduction chunk. Fixed so that the summation tree depends only
/// on the problem size.
inline constexpr std::size_t kChunk = 4096;

/// Worker cap from WNLS_THREADS (default: hardware concurrency).
unsigned thread_count();

/// Override the worker cap (0 restores the environment default).
void set_thread_count(unsigned threads);

/// Calls body(begin, end) for every chunk of [0, n). Chunks may run concurrently.
void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Sum of partial(begin, end) over all chunks, combined in chunk order.
double chunked_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial);

}  // namespace wnls::parallel
