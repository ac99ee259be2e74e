#pragma once

#include <cstddef>
#include <functional>

namespace kzk {

/// Worker count: KZK_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on dynamically scheduled worker threads.
/// Exceptions from any worker are rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace kzk
