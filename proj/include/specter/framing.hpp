#ifndef SPECTER_FRAMING_HPP
#define SPECTER_FRAMING_HPP

#include <cstddef>

#include "specter/bits.hpp"

namespace specter::framing {

/// Payload bits (MSB-first per byte) followed by the 256-bit SHA-256 digest
/// of the payload bytes. Total length is 8 * payload_len + 256.
struct FramedMessage {
    BitVec bits;
    std::size_t payload_len = 0;

    std::size_t size_bits() const { return bits.size(); }
};

constexpr std::size_t kDigestBits = 256;

inline std::size_t framed_bits(std::size_t payload_len) { return 8 * payload_len + kDigestBits; }

/// Throws EmptyPayload on an empty input.
FramedMessage frame(const Bytes& payload);

/// Recomputes the digest over the first 8*payload_len bits and compares it to
/// the next 256; trailing pad bits are ignored. Throws LengthError if bits are
/// too short, IntegrityError on digest mismatch.
Bytes verify(const BitVec& bits, std::size_t payload_len);

/// The payload bytes of a (possibly corrupted) framed bit string, no digest
/// check. Used by the --force extraction path.
Bytes payload_bytes_unchecked(const BitVec& bits, std::size_t payload_len);

}  // namespace specter::framing

#endif
