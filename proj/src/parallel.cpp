#include "volspill/parallel.hpp"

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace volspill {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads) {
    if (n == 0) return;
    unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n));

    if (n_threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace volspill
