#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace ncdist {

/// Runs fn(0..n-1) on up to `degree` worker threads. Callers write results
/// into per-index slots, so the outcome is independent of the degree.
template <typename Fn>
void parallel_for(int n, int degree, Fn&& fn) {
    if (degree <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i; (i = next.fetch_add(1)) < n;) fn(i);
    };
    std::vector<std::thread> pool;
    int workers = std::min(degree, n);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace ncdist
