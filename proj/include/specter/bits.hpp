#ifndef SPECTER_BITS_HPP
#define SPECTER_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace specter {

/// One byte per bit, values 0/1. Bit order is MSB-first within each byte
/// everywhere a byte string is expanded.
using BitVec = std::vector<std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

inline BitVec bytes_to_bits(const Bytes& bytes) {
    BitVec bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        for (int k = 7; k >= 0; --k) bits.push_back((b >> k) & 1);
    return bits;
}

/// Packs bits back into bytes, MSB-first. Length must be a multiple of 8.
inline Bytes bits_to_bytes(const std::uint8_t* bits, std::size_t nbits) {
    Bytes bytes(nbits / 8, 0);
    for (std::size_t i = 0; i < bytes.size() * 8; ++i)
        bytes[i / 8] = static_cast<std::uint8_t>((bytes[i / 8] << 1) | (bits[i] & 1));
    return bytes;
}

}  // namespace specter

#endif
