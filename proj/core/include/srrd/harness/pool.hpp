#ifndef SRRD_HARNESS_POOL_HPP
#define SRRD_HARNESS_POOL_HPP

#include <cstddef>
#include <functional>

namespace srrd::harness {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Callers write results by index, so output order never
/// depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace srrd::harness

#endif  // SRRD_HARNESS_POOL_HPP
