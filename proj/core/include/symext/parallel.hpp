#pragma once

#include <cstddef>
#include <functional>

namespace symext {

/// Default worker count: SYMEXT_JOBS if set and positive, otherwise 1.
int default_jobs();

/// Run body(i) for i in [0, n) on up to `jobs` threads. Each index runs
/// exactly once; the first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace symext
