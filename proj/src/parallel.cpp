#include "scio/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace scio {

std::size_t default_thread_count() {
    if (const char* env = std::getenv("SCIO_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (threads == 0) threads = default_thread_count();
    threads = std::min(threads, count);

    std::vector<std::exception_ptr> errors(count);
    if (threads == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        {
            std::vector<std::jthread> workers;
            workers.reserve(threads);
            for (std::size_t t = 0; t < threads; ++t) {
                workers.emplace_back([&] {
                    for (std::size_t k = next++; k < count; k = next++) {
                        try {
                            fn(k);
                        } catch (...) {
                            errors[k] = std::current_exception();
                        }
                    }
                });
            }
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace scio
