#include "geoclt/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace geoclt {

int worker_count(int requested)
{
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(n, 1);
    if (const char* env = std::getenv("GEOCLT_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0)
                n = std::min(n, cap);
        } catch (const std::exception&) {
        }
    }
    return n;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn)
{
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(count, 1 << 20))));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                stop = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace geoclt
