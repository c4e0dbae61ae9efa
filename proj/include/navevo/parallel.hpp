#pragma once

#include <cstddef>
#include <functional>

namespace navevo {

/// Worker count: an explicit positive value wins, then NAVEVO_JOBS, then the
/// hardware concurrency.
int resolve_jobs(int requested);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work items must be
/// independent; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace navevo
