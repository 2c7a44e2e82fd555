#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pisym {

inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

/// Per-task seed: reproducible and independent of execution order, so the
/// parallel and serial lanes generate identical inputs.
inline std::uint64_t task_seed(std::uint64_t base, std::uint64_t index) {
    return base + index * kSeedStride;
}

/// Runs fn(i) for i in [0, count), in parallel when built with OpenMP and
/// requested. fn must be safe to run concurrently for distinct indices.
template <typename Fn>
void for_each_index(long long count, bool parallel, Fn&& fn) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
#else
    (void)parallel;
#endif
    for (long long i = 0; i < count; ++i) fn(i);
}

}  // namespace pisym
