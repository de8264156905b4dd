#include "levysim/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "levysim/errors.hpp"

namespace levysim {

unsigned resolve_threads(std::optional<unsigned> requested,
                         std::optional<unsigned> config_value) {
    if (requested && *requested >= 1) return *requested;
    if (const char* env = std::getenv("LEVYSIM_THREADS")) {
        try {
            const unsigned long v = std::stoul(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string("invalid LEVYSIM_THREADS value: ") + env);
        }
    }
    if (config_value && *config_value >= 1) return *config_value;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

void run_tasks(std::size_t count, unsigned threads,
               const std::function<void(std::size_t)>& task) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(count, std::memory_order_relaxed);  // drain remaining work
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    const unsigned nworkers = static_cast<unsigned>(
        std::min<std::size_t>(threads, count));
    pool.reserve(nworkers);
    for (unsigned t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    pool.clear();  // join
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace levysim
