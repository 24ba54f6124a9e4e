#include "sheafrig/parallel.hpp"

#include <atomic>

namespace sheafrig {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads = std::max(0, n); }

int max_threads()
{
    int n = g_max_threads.load();
    if (n > 0)
        return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace sheafrig
