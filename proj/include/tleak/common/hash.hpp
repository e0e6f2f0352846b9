#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tleak {

// FNV-1a, 64-bit. Used for stable identifiers that must not depend on the
// standard library's std::hash.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string hex64(std::uint64_t v);

} // namespace tleak
