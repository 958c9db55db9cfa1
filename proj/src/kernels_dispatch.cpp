#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rfdress/kernels.hpp"

namespace rfdress::kernels {

#ifdef RFDRESS_HAVE_AVX2_TU
namespace detail {
const Backend& avx2_backend();
}
#endif

bool avx2_available() {
#if defined(RFDRESS_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Backend* resolve(const std::string& name) {
    if (name == "scalar") return &scalar_backend();
    if (name == "avx2") {
#ifdef RFDRESS_HAVE_AVX2_TU
        if (avx2_available()) return &detail::avx2_backend();
#endif
        throw std::runtime_error("kernel backend 'avx2' not available on this machine");
    }
    if (name == "auto") {
#ifdef RFDRESS_HAVE_AVX2_TU
        if (avx2_available()) return &detail::avx2_backend();
#endif
        return &scalar_backend();
    }
    throw std::invalid_argument("unknown kernel backend '" + name + "' (expected scalar, avx2 or auto)");
}

std::atomic<const Backend*>& slot() {
    static std::atomic<const Backend*> current{nullptr};
    return current;
}

}  // namespace

const Backend& active_backend() {
    const Backend* b = slot().load(std::memory_order_acquire);
    if (!b) {
        const char* env = std::getenv("RFDRESS_KERNELS");
        b = resolve(env && *env ? env : "auto");
        slot().store(b, std::memory_order_release);
    }
    return *b;
}

void select_backend(const std::string& name) {
    slot().store(resolve(name), std::memory_order_release);
}

}  // namespace rfdress::kernels
