#pragma once

#include <cstddef>
#include <functional>

namespace poplab {

// 0 means "use hardware concurrency".
std::size_t resolve_threads(std::size_t requested) noexcept;

// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
// split into contiguous blocks; callers write into slot i so results do not
// depend on the worker count. The first exception thrown by a worker is
// rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace poplab
