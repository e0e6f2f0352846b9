#include "tleak/kernels/trace_kernels.hpp"

#include <atomic>

namespace tleak::kernels {

std::string_view to_string(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "?";
}

bool isa_available(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

namespace {

Isa detect() {
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

} // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) {
    if (!isa_available(isa)) return false;
    current().store(isa, std::memory_order_relaxed);
    return true;
}

void reset_isa() { current().store(detect(), std::memory_order_relaxed); }

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    switch (active_isa()) {
    case Isa::Avx2: return avx2::first_difference(a, b, n);
    case Isa::Neon: return neon::first_difference(a, b, n);
    case Isa::Scalar: break;
    }
    return scalar::first_difference(a, b, n);
}

std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from) {
    switch (active_isa()) {
    case Isa::Avx2: return avx2::last_change(v, n, from);
    case Isa::Neon: return neon::last_change(v, n, from);
    case Isa::Scalar: break;
    }
    return scalar::last_change(v, n, from);
}

} // namespace tleak::kernels
