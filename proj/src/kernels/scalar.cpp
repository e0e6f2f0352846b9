#include "tleak/kernels/trace_kernels.hpp"

namespace tleak::kernels::scalar {

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return i;
    return npos;
}

std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from) {
    if (from < 1) from = 1;
    for (std::size_t i = n; i > from; --i)
        if (v[i - 1] != v[i - 2]) return i - 1;
    return npos;
}

} // namespace tleak::kernels::scalar
