#include "specter/keystream.hpp"

namespace specter::keystream {

namespace {

// Draws one uniform value in [0, m) from successive stream words, advancing
// the counter past any rejected words.
std::uint32_t uniform_below(const ChipStream& stream, std::uint64_t& counter, std::uint64_t m) {
    // Accept w < 2^64 - (2^64 mod m); the accepted range is a multiple of m.
    const std::uint64_t residue = (0 - m) % m;  // 2^64 mod m
    const std::uint64_t bound = 0 - residue;    // 2^64 - residue (wraps to 0 when residue == 0)
    for (;;) {
        const std::uint64_t w = word(stream.seed, stream.domain, counter++);
        if (residue == 0 || w < bound) return static_cast<std::uint32_t>(w % m);
    }
}

}  // namespace

std::vector<std::uint32_t> permutation(const ChipStream& stream, std::uint64_t counter_base, std::uint32_t n) {
    std::vector<std::uint32_t> perm(n);
    for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
    std::uint64_t counter = counter_base;
    for (std::uint32_t i = n; i > 1; --i) {
        const std::uint32_t j = uniform_below(stream, counter, i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace specter::keystream
