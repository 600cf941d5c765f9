#include "sm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace sm {

namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int effective_threads() {
    int n = g_threads.load();
    if (n > 0) return n;
    if (const char* env = std::getenv("SM_THREADS")) {
        int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace sm
