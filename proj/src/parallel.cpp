#include "vnm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace vnm {
namespace {

int threads_from_env() {
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("VNMKIT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return threads;
}

std::atomic<int>& thread_setting() {
    static std::atomic<int> setting{threads_from_env()};
    return setting;
}

}  // namespace

int max_threads() { return thread_setting().load(); }

void set_max_threads(int threads) { thread_setting().store(std::max(1, threads)); }

void parallel_for(Index begin, Index end, const std::function<void(Index)>& body) {
    const Index count = end - begin;
    if (count <= 0) return;
    const Index workers = std::min<Index>(max_threads(), count);
    if (workers <= 1) {
        for (Index i = begin; i < end; ++i) body(i);
        return;
    }

    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    const Index chunk = (count + workers - 1) / workers;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (Index w = 0; w < workers; ++w) {
            const Index lo = begin + w * chunk;
            const Index hi = std::min(end, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, w, lo, hi] {
                try {
                    for (Index i = lo; i < hi; ++i) body(i);
                } catch (...) {
                    failures[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
}

}  // namespace vnm
