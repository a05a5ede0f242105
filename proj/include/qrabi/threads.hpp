#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "qrabi/common.hpp"

namespace qrabi {

// Worker count: QRABI_THREADS if set (>=1), else hardware concurrency.
inline int thread_budget() {
    if (const char* env = std::getenv("QRABI_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
        }
        fail_valid("QRABI_THREADS must be a positive integer");
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs body(i) for i in [0, n) on up to thread_budget() threads. Static
// striped partition, so identical inputs execute the same work per worker;
// bodies must write only to disjoint slots. First exception is rethrown.
inline void parallel_for(long n, const std::function<void(long)>& body) {
    const int workers = static_cast<int>(std::min<long>(thread_budget(), n));
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (long i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace qrabi
