#ifndef DRIFTCAL_SRC_PARALLEL_HPP
#define DRIFTCAL_SRC_PARALLEL_HPP

#include <atomic>
#include <thread>
#include <vector>

namespace driftcal::detail {

/// Run fn(0..count-1) across up to `threads` workers. Results must be
/// written to pre-allocated, index-addressed slots so the merge order is
/// deterministic regardless of scheduling.
template <typename Fn>
void parallel_index_for(int count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    const int n_workers = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers - 1));
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace driftcal::detail

#endif  // DRIFTCAL_SRC_PARALLEL_HPP
