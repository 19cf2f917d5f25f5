#ifndef VSDK_PARALLEL_HPP
#define VSDK_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace vsdk::detail {

/// Runs fn(begin, end) over a static partition of [0, n). Deterministic as
/// long as the chunks write disjoint outputs. Falls back to a direct call
/// when the machine has a single core or the range is small.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_per_thread = 2048) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw <= 1 || n < 2 * min_per_thread) {
        fn(std::size_t{0}, n);
        return;
    }
    std::size_t chunks = std::min<std::size_t>(hw, n / min_per_thread);
    if (chunks < 2) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    std::size_t per = (n + chunks - 1) / chunks;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t b = c * per;
        std::size_t e = std::min(n, b + per);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

} // namespace vsdk::detail

#endif
