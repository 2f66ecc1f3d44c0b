#ifndef SPECTER_SHA256_HPP
#define SPECTER_SHA256_HPP

#include <array>
#include <cstddef>
#include <cstdint>

namespace specter {

/// FIPS 180-4 SHA-256 over a byte buffer. Self-contained; the published
/// test vectors are asserted in the test suite.
std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len);

}  // namespace specter

#endif
