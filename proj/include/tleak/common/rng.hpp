#pragma once

#include <cstdint>
#include <random>

namespace tleak {

// Reproducible random source. The engine is std::mt19937_64 (bit-exact across
// standard libraries); range reduction is done here rather than with
// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound). bound == 0 yields 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    // Uniform over all values representable in `width` bits.
    std::uint64_t bits(int width) {
        const std::uint64_t v = engine_();
        return width >= 64 ? v : (v & ((std::uint64_t{1} << width) - 1));
    }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t width_mask(int width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

} // namespace tleak
