#ifndef SPECTER_KEYSTREAM_HPP
#define SPECTER_KEYSTREAM_HPP

#include <cstdint>
#include <vector>

namespace specter::keystream {

/// Domain-separation constants. One seed feeds two independent consumers
/// (spreading chips and LDPC construction); the tag keeps their streams apart.
inline constexpr std::uint64_t CHIP_DOMAIN = 0x434849505F444F4DULL;
inline constexpr std::uint64_t LDPC_DOMAIN = 0x4C4450435F444F4DULL;

/// splitmix64 finalizer. mix64(0) == 0.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

/// Counter-addressable 64-bit word i of the stream for (seed, domain).
/// Equivalent to the (i+1)-th output of sequential splitmix64 started at
/// state mix64(seed ^ domain); no prior state is needed.
constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t domain, std::uint64_t i) noexcept {
    constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    const std::uint64_t base = mix64(seed ^ domain);
    return mix64(base + (i + 1) * kGolden);
}

/// A counter-addressable stream of ±1 chips. chip(i) is a pure function of
/// (seed, domain, i); disjoint index ranges can be generated independently.
struct ChipStream {
    std::uint64_t seed = 0;
    std::uint64_t domain = CHIP_DOMAIN;

    /// Chip i: bit (i mod 64) of word(i / 64), LSB-first; 1 -> +1, 0 -> -1.
    int chip(std::uint64_t i) const noexcept {
        const std::uint64_t w = word(seed, domain, i >> 6);
        return ((w >> (i & 63)) & 1) ? +1 : -1;
    }
};

/// Sequential chip reader for a contiguous index range. Caches the current
/// 64-bit word so a run of s chips costs ~s/64 finalizer evaluations.
class ChipCursor {
public:
    ChipCursor(const ChipStream& stream, std::uint64_t start) noexcept
        : stream_(stream),
          index_(start),
          word_index_(start >> 6),
          word_(word(stream.seed, stream.domain, start >> 6)) {}

    int next() noexcept {
        if ((index_ >> 6) != word_index_) {
            word_index_ = index_ >> 6;
            word_ = word(stream_.seed, stream_.domain, word_index_);
        }
        const int c = ((word_ >> (index_ & 63)) & 1) ? +1 : -1;
        ++index_;
        return c;
    }

private:
    ChipStream stream_;
    std::uint64_t index_;
    std::uint64_t word_index_;
    std::uint64_t word_;
};

/// Fisher-Yates permutation of 0..n-1 driven by successive words starting at
/// counter_base. Each draw in [0, m) rejects words w >= 2^64 - (2^64 mod m)
/// so the result is exactly uniform.
std::vector<std::uint32_t> permutation(const ChipStream& stream, std::uint64_t counter_base, std::uint32_t n);

}  // namespace specter::keystream

#endif
