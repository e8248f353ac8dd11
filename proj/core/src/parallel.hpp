#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace draftvec::detail {

// Runs fn(begin, end) over contiguous slices of [0, n). Each slice writes a
// disjoint range, so the result does not depend on the worker count.
template <typename Fn>
void parallel_rows(int n, int workers, Fn&& fn) {
    workers = std::clamp(workers, 1, std::max(1, n));
    if (workers == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (n + workers - 1) / workers;
    for (int begin = 0; begin < n; begin += chunk) {
        const int end = std::min(n, begin + chunk);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

}  // namespace draftvec::detail
