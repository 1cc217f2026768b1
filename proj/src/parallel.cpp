#include "strichartz/parallel.hpp"

namespace strichartz {

namespace {
std::atomic<unsigned> g_workers{0};
}

void set_max_workers(unsigned n) { g_workers.store(n); }

unsigned max_workers() {
    const unsigned n = g_workers.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace strichartz
