#ifndef SPECTER_LDPC_HPP
#define SPECTER_LDPC_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "specter/bits.hpp"

namespace specter::ldpc {

/// Sparse parity-check matrix of a (3,6)-regular Gallager code: every check
/// touches exactly 6 columns, every column exactly 3 checks. Entries are kept
/// as Tanner edges; a column may carry the same check twice (the pair cancels
/// mod 2 in matrix semantics but both edges participate in decoding).
struct ParityCheck {
    std::uint32_t n = 0;                  // codeword bits
    std::uint32_t m = 0;                  // checks, n/2
    std::vector<std::uint32_t> entries;   // 6*m column indices, row-major, sorted per row

    std::span<const std::uint32_t> row(std::uint32_t check) const {
        return {entries.data() + 6 * std::size_t(check), 6};
    }
};

/// Systematic encoder data. cols maps systematic position -> original column:
/// positions [0, k) are message slots, [k, n) parity slots. Parity rows hold
/// the GF(2) combination row of each message bit, m bits packed per row.
struct Generator {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t rank = 0;               // independent checks (m-2 for this ensemble)
    std::vector<std::uint32_t> cols;      // size n, the column permutation
    std::uint32_t words_per_row = 0;
    std::vector<std::uint64_t> parity_rows;  // k * words_per_row
};

struct LdpcCode {
    ParityCheck h;
    Generator g;
};

/// Normalized channel outputs (nominal ±1 symbols) with their noise level.
struct SoftWord {
    std::vector<double> values;
    double sigma = 1.0;
};

struct DecodeResult {
    BitVec bits;        // n hard-decision bits
    bool converged = false;
    std::uint32_t iterations = 0;
};

/// Deterministic code construction from (seed, n): one keystream permutation
/// of the 3n Tanner slots assigns 3 checks per column, then GF(2) elimination
/// with column pivoting yields the systematic generator. The band-sum
/// dependencies of the regular ensemble leave rank m-2; lower rank retries
/// with a shifted permutation counter (max 8) before ConstructionError.
/// Requires n even, n >= 12.
LdpcCode build(std::uint64_t seed, std::uint32_t n);

/// message (k bits) -> codeword (n bits, original column order), zero syndrome.
BitVec encode(const Generator& g, const BitVec& message);

/// word * H^T mod 2.
BitVec syndrome(const ParityCheck& h, const BitVec& word);

/// Sum-product belief propagation in the LLR domain, channel LLR 2y/sigma^2,
/// LLR > 0 meaning the bit whose symbol is +1 (bit 1). Early exit on zero
/// syndrome; non-convergence is reported, never thrown.
DecodeResult decode(const ParityCheck& h, const SoftWord& soft, std::uint32_t max_iter);

/// The k message bits at the systematic slots of a codeword.
BitVec extract_message(const Generator& g, const BitVec& codeword);

}  // namespace specter::ldpc

#endif
