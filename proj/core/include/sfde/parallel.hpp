#pragma once

#include <cstddef>
#include <functional>

namespace sfde {

/// Resolves a requested worker count; 0 means std::thread::hardware_concurrency().
std::size_t resolve_threads(std::size_t requested) noexcept;

/// Runs body(i) for i in [0, count) on up to `threads` workers. Items are claimed
/// dynamically; callers must make body(i) independent of scheduling. The first exception
/// thrown (lowest index wins among those observed) is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace sfde
