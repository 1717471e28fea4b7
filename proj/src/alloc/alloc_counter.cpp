#include "tmt/alloc_counter.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <new>

#include <gmp.h>
#include <malloc.h>

namespace {

// Signed, so a block allocated before the hooks were installed cannot wrap
// the counter when it is freed.
std::atomic<long long> g_current{0};
std::atomic<long long> g_peak{0};

void note(long long delta) noexcept {
    const long long now = g_current.fetch_add(delta) + delta;
    long long seen = g_peak.load();
    while (now > seen && !g_peak.compare_exchange_weak(seen, now)) {}
}

void* counted(std::size_t n) {
    void* p = std::malloc(n ? n : 1);
    if (!p) throw std::bad_alloc();
    note(static_cast<long long>(malloc_usable_size(p)));
    return p;
}

void release(void* p) noexcept {
    if (!p) return;
    note(-static_cast<long long>(malloc_usable_size(p)));
    std::free(p);
}

// GMP allocates through malloc; route it through the same counter.
void* gmp_alloc(std::size_t n) { return counted(n); }
void gmp_free(void* p, std::size_t) { release(p); }
void* gmp_realloc(void* p, std::size_t, std::size_t n) {
    const auto before = static_cast<long long>(malloc_usable_size(p));
    void* q = std::realloc(p, n);
    if (!q) throw std::bad_alloc();
    note(static_cast<long long>(malloc_usable_size(q)) - before);
    return q;
}

const bool g_hooked = [] {
    mp_set_memory_functions(gmp_alloc, gmp_realloc, gmp_free);
    return true;
}();

}  // namespace

void* operator new(std::size_t n) { return counted(n); }
void* operator new[](std::size_t n) { return counted(n); }
void operator delete(void* p) noexcept { release(p); }
void operator delete[](void* p) noexcept { release(p); }
void operator delete(void* p, std::size_t) noexcept { release(p); }
void operator delete[](void* p, std::size_t) noexcept { release(p); }

namespace tmt::alloc {

std::size_t current() noexcept { return static_cast<std::size_t>(std::max(0LL, g_current.load())); }
std::size_t peak() noexcept { return static_cast<std::size_t>(std::max(0LL, g_peak.load())); }
void reset_peak() noexcept {
    (void)g_hooked;
    g_peak.store(g_current.load());
}

}  // namespace tmt::alloc
