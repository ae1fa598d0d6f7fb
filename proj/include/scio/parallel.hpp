#pragma once

#include <cstddef>
#include <functional>

namespace scio {

/// Worker count used when a caller passes 0: $SCIO_THREADS if set and
/// positive, otherwise std::thread::hardware_concurrency().
std::size_t default_thread_count();

/// Runs fn(k) for k in [0, count) on up to `threads` workers (0 = default).
/// Each index is handled exactly once. If any call throws, the exception from
/// the lowest failing index is rethrown after all workers finish, so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace scio
