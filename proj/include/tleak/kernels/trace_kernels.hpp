#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace tleak::kernels {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

// Smallest i < n with a[i] != b[i], or npos.
std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);

// Largest i in [max(from, 1), n) with v[i] != v[i - 1], or npos.
std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from);

bool isa_available(Isa isa);
Isa active_isa();
// Overrides dispatch; used by the equivalence tests. Returns false when the
// ISA is not available on this machine.
bool force_isa(Isa isa);
void reset_isa();

namespace scalar {
std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from);
} // namespace scalar

namespace avx2 {
std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from);
} // namespace avx2

namespace neon {
std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
std::size_t last_change(const std::uint64_t* v, std::size_t n, std::size_t from);
} // namespace neon

} // namespace tleak::kernels
