#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace bates {

// Runs fn(0..n_blocks-1), possibly on several threads. Each block must write
// only to its own slot so results are identical for any thread count.
template <typename Fn>
void parallel_blocks(long n_blocks, int threads, Fn&& fn) {
    if (threads <= 1 || n_blocks <= 1) {
        for (long b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;   // written by the one thread that wins the flag
    std::atomic<bool> failed{false};
    const int nt = static_cast<int>(std::min<long>(threads, n_blocks));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const long b = next.fetch_add(1, std::memory_order_relaxed);
                if (b >= n_blocks || failed.load(std::memory_order_relaxed)) break;
                try {
                    fn(b);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed && first_error) std::rethrow_exception(first_error);
}

} // namespace bates
