#ifndef SPECTER_HALF_HPP
#define SPECTER_HALF_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace specter {

/// Exact widening of an IEEE 754 binary16 value.
inline double f16_to_f64(std::uint16_t h) noexcept {
    const int sign = (h >> 15) & 1;
    const int exp = (h >> 10) & 0x1F;
    const int mant = h & 0x3FF;
    double v;
    if (exp == 0) {
        v = std::ldexp(double(mant), -24);  // subnormal, unit 2^-24
    } else if (exp == 31) {
        v = mant ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
    } else {
        v = std::ldexp(double(1024 + mant), exp - 15 - 10);
    }
    return sign ? -v : v;
}

/// Round-to-nearest-even conversion to binary16, directly from the f64 bits
/// (no intermediate f32, so no double rounding). Overflow goes to +-infinity,
/// gradual underflow to subnormals.
inline std::uint16_t f64_to_f16(double x) noexcept {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 63) << 15);
    const int exp = static_cast<int>((bits >> 52) & 0x7FF);
    const std::uint64_t mant = bits & 0xFFFFFFFFFFFFFULL;

    if (exp == 0x7FF) return sign | (mant ? 0x7E00 : 0x7C00);  // nan / inf
    if (exp == 0 && mant == 0) return sign;                    // +-0 (f64 subnormals underflow below)

    const int e = exp - 1023;
    if (e >= -14) {
        // Normal target range: round the 52-bit fraction to 10 bits.
        std::uint64_t m = mant >> 42;
        const std::uint64_t rem = mant & ((1ULL << 42) - 1);
        const std::uint64_t half = 1ULL << 41;
        if (rem > half || (rem == half && (m & 1))) ++m;
        int e16 = e;
        if (m == 1024) {
            m = 0;
            ++e16;
        }
        if (e16 > 15) return sign | 0x7C00;
        return static_cast<std::uint16_t>(sign | ((e16 + 15) << 10) | m);
    }

    // Subnormal target: round x / 2^-24 to an integer.
    if (exp == 0) return sign;  // f64 subnormals sit far below half of 2^-24
    const std::uint64_t full = (1ULL << 52) | mant;
    const int shift = 28 - e;  // x = full * 2^(e-52), so x / 2^-24 = full >> shift
    if (shift >= 64) return sign;
    std::uint64_t m = full >> shift;
    const std::uint64_t rem = full & ((1ULL << shift) - 1);
    const std::uint64_t half = 1ULL << (shift - 1);
    if (rem > half || (rem == half && (m & 1))) ++m;
    return static_cast<std::uint16_t>(sign | m);  // m == 1024 lands on the smallest normal
}

}  // namespace specter

#endif
