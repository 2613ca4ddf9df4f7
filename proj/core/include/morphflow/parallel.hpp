#ifndef MORPHFLOW_PARALLEL_HPP
#define MORPHFLOW_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace morphflow {

/// Caps the number of worker threads used by parallel_for. 0 restores the
/// hardware default. Also honors the MORPHFLOW_THREADS environment variable
/// until an explicit cap is set.
void set_thread_cap(int threads);

int thread_cap();

/// Runs fn(begin..end) split into contiguous chunks across workers.
/// Iterations must be independent; the call returns after all chunks finish.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace morphflow

#endif  // MORPHFLOW_PARALLEL_HPP
