#include "anyent/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace anyent {

int thread_count() {
    if(const char *env = std::getenv("ANYON_ENT_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if(end != env && v > 0) return int(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
    const auto workers = std::min<std::size_t>(std::size_t(thread_count()), n);
    if(workers <= 1) {
        for(std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for(std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for(std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch(...) {
                    std::lock_guard lock(error_mutex);
                    if(!error) error = std::current_exception();
                }
            }
        });
    for(auto &t : pool) t.join();
    if(error) std::rethrow_exception(error);
}

} // namespace anyent
