#pragma once

#include <cstddef>
#include <functional>

namespace dereverb {

// Upper bound on worker threads used by frame-parallel operations.
// 0 selects std::thread::hardware_concurrency(). Results never depend on
// this value: every parallel stage writes disjoint outputs and reduces in
// a fixed order.
void set_max_threads(std::size_t n);
std::size_t max_threads();

// Calls fn(i) for every i in [0, count). Work is split into contiguous
// chunks, one per worker. fn must only touch state owned by index i.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn);

// Calls fn(worker, begin, end) once per contiguous chunk so callers can
// hold per-worker scratch (FFT plans, buffers).
void parallel_chunks(
    std::size_t count,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace dereverb
