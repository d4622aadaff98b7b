#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace cube {

/// Worker budget handed down from the caller. Results never depend on it.
struct Parallelism {
    unsigned threads = 1;

    static Parallelism available() {
        if (const char* env = std::getenv("CUBE_CONSTANTS_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return {static_cast<unsigned>(v)};
        }
        return {std::max(1U, std::thread::hardware_concurrency())};
    }
};

/// Evaluate fn(block) for block in [0, blocks) on up to `threads` workers and
/// return the results in block order.
template <class T, class Fn>
std::vector<T> map_blocks(std::size_t blocks, Parallelism par, Fn&& fn) {
    std::vector<T> out(blocks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, par.threads), blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) out[b] = fn(b);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t b = next++; b < blocks; b = next++) out[b] = fn(b);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace cube
