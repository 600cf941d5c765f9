#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sm {

// Every data-parallel loop in this project runs through block_sum: the
// index space is cut into fixed-size blocks, each block is summed
// sequentially, and the block sums are folded by a pairwise tree. The
// result is bit-identical for any thread count, and ExecMode::Serial is
// the reference the parallel path is tested against.

enum class ExecMode { Serial, Parallel };

void set_threads(int n);   // 0 = hardware default
int effective_threads();

inline constexpr long long kBlockSize = 1024;

template <typename T>
T pairwise_fold(std::vector<T> v) {
    if (v.empty()) return T{};
    while (v.size() > 1) {
        size_t half = v.size() / 2;
        for (size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (v.size() % 2) {
            v[half] = v.back();
            v.resize(half + 1);
        } else {
            v.resize(half);
        }
    }
    return v[0];
}

template <typename T, typename TermFn>
T block_sum(long long n, TermFn&& term, ExecMode mode = ExecMode::Parallel) {
    if (n <= 0) return T{};
    long long blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<T> partial(static_cast<size_t>(blocks), T{});
#ifdef _OPENMP
    bool parallel = mode == ExecMode::Parallel && blocks > 1;
#else
    bool parallel = false;
#endif
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
        for (long long b = 0; b < blocks; ++b) {
            T acc{};
            long long end = std::min(n, (b + 1) * kBlockSize);
            for (long long i = b * kBlockSize; i < end; ++i) acc = acc + term(i);
            partial[static_cast<size_t>(b)] = acc;
        }
#endif
    } else {
        for (long long b = 0; b < blocks; ++b) {
            T acc{};
            long long end = std::min(n, (b + 1) * kBlockSize);
            for (long long i = b * kBlockSize; i < end; ++i) acc = acc + term(i);
            partial[static_cast<size_t>(b)] = acc;
        }
    }
    return pairwise_fold(std::move(partial));
}

}  // namespace sm
