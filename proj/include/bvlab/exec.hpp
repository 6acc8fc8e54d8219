#pragma once

#include <algorithm>
#include <cstddef>

namespace bvlab {

enum class Execution { serial, parallel };

// Work is split into fixed-size chunks regardless of thread count, so a
// parallel run touches exactly the same chunks (and the same derived RNG
// streams) as a serial one. Callers must write results to disjoint,
// chunk-indexed locations; any reduction happens serially afterwards.
inline constexpr std::size_t kChunkSize = 65536;

inline std::size_t chunk_count(std::size_t count) {
    return (count + kChunkSize - 1) / kChunkSize;
}

template <class Fn>
void for_each_chunk(std::size_t count, Execution exec, Fn&& fn) {
    const auto chunks = static_cast<std::ptrdiff_t>(chunk_count(count));
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t c = 0; c < chunks; ++c) {
            const std::size_t lo = static_cast<std::size_t>(c) * kChunkSize;
            fn(static_cast<std::size_t>(c), lo, std::min(count, lo + kChunkSize));
        }
    } else {
        for (std::ptrdiff_t c = 0; c < chunks; ++c) {
            const std::size_t lo = static_cast<std::size_t>(c) * kChunkSize;
            fn(static_cast<std::size_t>(c), lo, std::min(count, lo + kChunkSize));
        }
    }
}

// One heavy task per index (model training, scenario sweeps). Same contract:
// disjoint output slots, serial post-processing.
template <class Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
    const auto n = static_cast<std::ptrdiff_t>(count);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    }
}

}  // namespace bvlab
