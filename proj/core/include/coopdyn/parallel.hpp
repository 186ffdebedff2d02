// parallel.hpp — Deterministic fork-join helper for independent work items.

#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace coopdyn {

// Runs fn(i) for i in [0, count) on up to `workers` threads (0 = hardware
// concurrency).  Work items must be independent; each writes only to its
// own output slot, so results never depend on the worker count.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    unsigned n = workers > 0 ? static_cast<unsigned>(workers) : std::thread::hardware_concurrency();
    if (n <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (n > count) n = static_cast<unsigned>(count);

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += n) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace coopdyn
