#pragma once

#include <cstddef>
#include <functional>

namespace qsplit {

/// Worker count for data-parallel loops. Starts from QSPLIT_THREADS when set,
/// otherwise the hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Reads QSPLIT_THREADS; 0 when unset, Config error unless a positive integer.
int threads_from_env();

/// Calls body(begin, end) on contiguous chunks of [0, n), one chunk per
/// worker. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace qsplit
