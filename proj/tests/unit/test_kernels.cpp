#include "doctest.h"

#include <random>
#include <vector>

#include "tleak/kernels/trace_kernels.hpp"

using namespace tleak::kernels;

namespace {

std::size_t ref_first_difference(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return i;
    return npos;
}

std::size_t ref_last_change(const std::vector<std::uint64_t>& v, std::size_t from) {
    std::size_t out = npos;
    for (std::size_t i = std::max<std::size_t>(from, 1); i < v.size(); ++i)
        if (v[i] != v[i - 1]) out = i;
    return out;
}

struct Variant {
    Isa isa;
    std::size_t (*fd)(const std::uint64_t*, const std::uint64_t*, std::size_t);
    std::size_t (*lc)(const std::uint64_t*, std::size_t, std::size_t);
};

std::vector<Variant> available() {
    std::vector<Variant> out{{Isa::Scalar, scalar::first_difference, scalar::last_change}};
    if (isa_available(Isa::Avx2)) out.push_back({Isa::Avx2, avx2::first_difference, avx2::last_change});
    if (isa_available(Isa::Neon)) out.push_back({Isa::Neon, neon::first_difference, neon::last_change});
    return out;
}

} // namespace

TEST_CASE("kernel variants agree with the reference on random inputs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = rng() % 70;
        std::vector<std::uint64_t> a(n), b;
        const std::uint64_t alphabet = 1 + rng() % 4;
        for (auto& x : a) x = rng() % alphabet;
        b = a;
        if (n && rng() % 3) b[rng() % n] ^= 1ULL << (rng() % 64);
        const std::size_t from = rng() % (n + 3);
        for (const auto& v : available()) {
            CAPTURE(to_string(v.isa));
            CHECK(v.fd(a.data(), b.data(), n) == ref_first_difference(a, b));
            CHECK(v.lc(a.data(), n, from) == ref_last_change(a, from));
        }
    }
}

TEST_CASE("kernel edge cases") {
    for (const auto& v : available()) {
        CHECK(v.fd(nullptr, nullptr, 0) == npos);
        CHECK(v.lc(nullptr, 0, 0) == npos);
        const std::uint64_t one[] = {7};
        CHECK(v.lc(one, 1, 0) == npos);
        const std::uint64_t five[] = {0, 0, 0, 0, 1};
        CHECK(v.lc(five, 5, 0) == 4);
        CHECK(v.lc(five, 5, 5) == npos);
        std::vector<std::uint64_t> big(1000, 3), other(1000, 3);
        other[999] = 4;
        CHECK(v.fd(big.data(), other.data(), 1000) == 999);
        big[1] = 9;
        CHECK(v.lc(big.data(), 1000, 0) == 2);
    }
}

TEST_CASE("dispatch can be forced and reset") {
    CHECK(force_isa(Isa::Scalar));
    CHECK(active_isa() == Isa::Scalar);
    const std::uint64_t a[] = {1, 2, 3}, b[] = {1, 2, 4};
    CHECK(first_difference(a, b, 3) == 2);
    for (auto isa : {Isa::Avx2, Isa::Neon})
        if (isa_available(isa)) {
            CHECK(force_isa(isa));
            CHECK(active_isa() == isa);
            CHECK(first_difference(a, b, 3) == 2);
        } else {
            CHECK_FALSE(force_isa(isa));
        }
    reset_isa();
    CHECK(isa_available(active_isa()));
}
