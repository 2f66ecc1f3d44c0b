#include "specter/framing.hpp"

#include <cstring>

#include "specter/errors.hpp"
#include "specter/sha256.hpp"

namespace specter::framing {

FramedMessage frame(const Bytes& payload) {
    if (payload.empty()) throw EmptyPayload("frame: payload must be at least one byte");
    FramedMessage out;
    out.payload_len = payload.size();
    out.bits = bytes_to_bits(payload);
    const auto digest = sha256(payload.data(), payload.size());
    const Bytes digest_bytes(digest.begin(), digest.end());
    const BitVec digest_bits = bytes_to_bits(digest_bytes);
    out.bits.insert(out.bits.end(), digest_bits.begin(), digest_bits.end());
    return out;
}

Bytes payload_bytes_unchecked(const BitVec& bits, std::size_t payload_len) {
    if (bits.size() < framed_bits(payload_len))
        throw LengthError("verify: bit string shorter than 8*payload_len + 256");
    return bits_to_bytes(bits.data(), 8 * payload_len);
}

Bytes verify(const BitVec& bits, std::size_t payload_len) {
    Bytes payload = payload_bytes_unchecked(bits, payload_len);
    const auto digest = sha256(payload.data(), payload.size());
    const Bytes received = bits_to_bytes(bits.data() + 8 * payload_len, kDigestBits);
    if (std::memcmp(digest.data(), received.data(), digest.size()) != 0)
        throw IntegrityError("verify: digest mismatch (payload corrupted or wrong seed/length)");
    return payload;
}

}  // namespace specter::framing
