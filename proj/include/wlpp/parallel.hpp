#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wlpp {

/// Worker count: $WLPP_WORKERS when set to a positive integer, else the hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, count) across worker_count() threads. Each index must own
/// its random stream; results are then independent of the worker count. The first
/// exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace wlpp
