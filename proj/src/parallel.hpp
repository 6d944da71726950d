#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace atccs::detail {

// Runs fn(i) for i in [0, n) on up to `jobs` threads.  Callers write results
// into pre-sized slots, so the outcome does not depend on scheduling.
template <class Fn>
void parallelFor(std::size_t n, int jobs, Fn fn) {
    if (jobs <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> nextIndex{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto worker = [&] {
        try {
            for (std::size_t i; (i = nextIndex.fetch_add(1)) < n;) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failureMutex);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> threads;
    int count = std::min<int>(jobs, static_cast<int>(n));
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace atccs::detail
