#include "kp2/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace kp2 {
namespace {

int g_threads = 0;

int resolve_threads() {
    if (g_threads > 0) return g_threads;
    if (const char* env = std::getenv("KP2_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

} // namespace

void set_threads(int n) { g_threads = n; }

int thread_count() { return resolve_threads(); }

void parallel_for(int n, const std::function<void(int)>& fn) {
    int nt = resolve_threads();
    if (nt <= 1 || n < 32) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    // Fixed block size keeps the work decomposition independent of nt.
    const int block = 16;
    const int nblocks = (n + block - 1) / block;
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int b = next.fetch_add(1);
            if (b >= nblocks) return;
            int lo = b * block, hi = std::min(n, lo + block);
            for (int i = lo; i < hi; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min(nt, nblocks) - 1;
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

} // namespace kp2
