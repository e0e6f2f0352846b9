#include "tleak/kernels/trace_kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace tleak::kernels::neon {

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t eq = vceqq_u64(vld1q_u64(a + i), vld1q_u64(b + i));
        if (vgetq_lane_u64(eq, 0) == 0) return i;
        if (vgetq_lane_u64(eq, 1) == 0) return i + 1;
    }
    for (; i < n; ++i)
        if (a[i] != b[i]) return i;
    return npos;
}

std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from) {
    if (from < 1) from = 1;
    std::size_t i = n;
    while (i >= from + 2) {
        const uint64x2_t eq = vceqq_u64(vld1q_u64(v + i - 2), vld1q_u64(v + i - 3));
        if (vgetq_lane_u64(eq, 1) == 0) return i - 1;
        if (vgetq_lane_u64(eq, 0) == 0) return i - 2;
        i -= 2;
    }
    for (; i > from; --i)
        if (v[i - 1] != v[i - 2]) return i - 1;
    return npos;
}

} // namespace tleak::kernels::neon

#else

namespace tleak::kernels::neon {

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    return scalar::first_difference(a, b, n);
}

std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from) {
    return scalar::last_change(v, n, from);
}

} // namespace tleak::kernels::neon

#endif
