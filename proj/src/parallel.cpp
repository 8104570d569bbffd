#include "vort2d/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace vort {

namespace {
std::atomic<int> g_threads{1};
}

void set_default_threads(int threads) { g_threads = threads < 1 ? 1 : threads; }

int default_threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  int threads) {
    if (threads <= 0) threads = default_threads();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += nt) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace vort
