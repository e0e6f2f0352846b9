#include "tleak/kernels/trace_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace tleak::kernels::avx2 {

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const int eq = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(x, y)));
        if (eq != 0xF) return i + static_cast<std::size_t>(__builtin_ctz(~eq & 0xF));
    }
    for (; i < n; ++i)
        if (a[i] != b[i]) return i;
    return npos;
}

std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from) {
    if (from < 1) from = 1;
    std::size_t i = n;
    // Compare v[i-4..i) against v[i-5..i-1).
    while (i >= from + 4) {
        const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i - 4));
        const __m256i prev = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i - 5));
        const int eq = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(cur, prev)));
        if (eq != 0xF) return i - 4 + static_cast<std::size_t>(31 - __builtin_clz(~eq & 0xF));
        i -= 4;
    }
    for (; i > from; --i)
        if (v[i - 1] != v[i - 2]) return i - 1;
    return npos;
}

} // namespace tleak::kernels::avx2

#else

namespace tleak::kernels::avx2 {

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    return scalar::first_difference(a, b, n);
}

std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from) {
    return scalar::last_change(v, n, from);
}

} // namespace tleak::kernels::avx2

#endif
