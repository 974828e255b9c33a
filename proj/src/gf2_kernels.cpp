#include "qrng/gf2_kernels.hpp"

#include <atomic>

namespace qrng::gf2 {
namespace {

const KernelTable* best_table() {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) return &avx2_kernels();
#endif
#if defined(__aarch64__)
    return &neon_kernels();
#endif
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> t{best_table()};
    return t;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool set_backend(const std::string& name) {
    if (name == "auto") {
        current().store(best_table(), std::memory_order_relaxed);
        return true;
    }
    if (name == "scalar") {
        current().store(&scalar_kernels(), std::memory_order_relaxed);
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && avx2_supported()) {
        current().store(&avx2_kernels(), std::memory_order_relaxed);
        return true;
    }
#endif
#if defined(__aarch64__)
    if (name == "neon") {
        current().store(&neon_kernels(), std::memory_order_relaxed);
        return true;
    }
#endif
    return false;
}

std::string active_backend() { return active().name; }

std::vector<std::string> available_backends() {
    std::vector<std::string> v{"scalar"};
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) v.emplace_back("avx2");
#endif
#if defined(__aarch64__)
    v.emplace_back("neon");
#endif
    return v;
}

}  // namespace qrng::gf2
