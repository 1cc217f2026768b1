#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace strichartz {

// Upper bound on worker threads for sweeps and slice loops; 0 means one per core.
void set_max_workers(unsigned n);
unsigned max_workers();

// Runs body(i) for i in [0, n) on a bounded pool. Each index writes only its
// own output slot, so results are independent of scheduling. The first
// exception thrown by any index is rethrown after all workers finish.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned w = static_cast<unsigned>(std::min<std::size_t>(max_workers(), n));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto run = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace strichartz
