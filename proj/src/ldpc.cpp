#include "specter/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specter/errors.hpp"
#include "specter/keystream.hpp"

namespace specter::ldpc {

namespace {

// Dense GF(2) row-reduction workspace: m rows of n bits.
struct DenseRows {
    std::uint32_t words = 0;
    std::vector<std::uint64_t> data;

    DenseRows(std::uint32_t m, std::uint32_t n) : words((n + 63) / 64), data(std::size_t(m) * words, 0) {}

    std::uint64_t* row(std::uint32_t r) { return data.data() + std::size_t(r) * words; }
    bool bit(std::uint32_t r, std::uint32_t c) const {
        return (data[std::size_t(r) * words + c / 64] >> (c % 64)) & 1;
    }
    void flip(std::uint32_t r, std::uint32_t c) { data[std::size_t(r) * words + c / 64] ^= 1ULL << (c % 64); }
    void xor_rows(std::uint32_t dst, std::uint32_t src) {
        std::uint64_t* d = row(dst);
        const std::uint64_t* s = row(src);
        for (std::uint32_t w = 0; w < words; ++w) d[w] ^= s[w];
    }
    void swap_rows(std::uint32_t a, std::uint32_t b) {
        if (a != b) std::swap_ranges(row(a), row(a) + words, row(b));
    }
    bool row_zero(std::uint32_t r) {
        const std::uint64_t* p = row(r);
        for (std::uint32_t w = 0; w < words; ++w)
            if (p[w]) return false;
        return true;
    }
};

ParityCheck make_parity_check(std::uint64_t seed, std::uint32_t n, std::uint64_t counter_base) {
    const std::uint32_t m = n / 2;
    const keystream::ChipStream stream{seed, keystream::LDPC_DOMAIN};
    // 3n slots, slot t standing for check t/6; one permutation deals the slots
    // out three per column.
    const auto perm = keystream::permutation(stream, counter_base, 3 * n);

    ParityCheck h;
    h.n = n;
    h.m = m;
    h.entries.assign(std::size_t(6) * m, 0);
    std::vector<std::uint32_t> fill(m, 0);
    for (std::uint32_t col = 0; col < n; ++col) {
        for (std::uint32_t u = 0; u < 3; ++u) {
            const std::uint32_t check = perm[std::size_t(3) * col + u] / 6;
            h.entries[std::size_t(6) * check + fill[check]++] = col;
        }
    }
    for (std::uint32_t c = 0; c < m; ++c)
        std::sort(h.entries.begin() + std::size_t(6) * c, h.entries.begin() + std::size_t(6) * (c + 1));
    return h;
}

// Column-pivoting Gauss-Jordan pushing pivot columns into the parity slots.
// Returns the achieved rank; cols and reduced rows come back through refs.
std::uint32_t systematize(const ParityCheck& h, DenseRows& rows, std::vector<std::uint32_t>& cols) {
    const std::uint32_t n = h.n, m = h.m, k = n / 2;
    for (std::uint32_t c = 0; c < m; ++c)
        for (std::uint32_t col : h.row(c)) rows.flip(c, col);  // duplicate edges cancel mod 2

    cols.resize(n);
    for (std::uint32_t j = 0; j < n; ++j) cols[j] = j;

    std::uint32_t rank = 0;
    for (std::uint32_t pos = k; pos < n && rank < m; ++pos) {
        // Find any remaining column with a 1 below the current pivot row,
        // preferring back positions so the front stays message slots.
        std::uint32_t pivot_q = n, pivot_r = m;
        for (std::uint32_t q = pos; q < n && pivot_q == n; ++q)
            for (std::uint32_t r = rank; r < m; ++r)
                if (rows.bit(r, cols[q])) {
                    pivot_q = q;
                    pivot_r = r;
                    break;
                }
        for (std::uint32_t q = 0; q < k && pivot_q == n; ++q)
            for (std::uint32_t r = rank; r < m; ++r)
                if (rows.bit(r, cols[q])) {
                    pivot_q = q;
                    pivot_r = r;
                    break;
                }
        if (pivot_q == n) break;  // remaining rows are all zero

        std::swap(cols[pos], cols[pivot_q]);
        rows.swap_rows(rank, pivot_r);
        const std::uint32_t pc = cols[pos];
        for (std::uint32_t r = 0; r < m; ++r)
            if (r != rank && rows.bit(r, pc)) rows.xor_rows(r, rank);
        ++rank;
    }
    return rank;
}

}  // namespace

LdpcCode build(std::uint64_t seed, std::uint32_t n) {
    if (n < 12 || n % 2 != 0)
        throw ConstructionError("ldpc::build: n must be even and at least 12, got " + std::to_string(n));
    const std::uint32_t m = n / 2, k = n / 2;

    for (std::uint32_t attempt = 0; attempt <= 8; ++attempt) {
        ParityCheck h = make_parity_check(seed, n, std::uint64_t(attempt) * 8 * n);
        DenseRows rows(m, n);
        std::vector<std::uint32_t> cols;
        const std::uint32_t rank = systematize(h, rows, cols);
        // Two dependent checks are structural (all rows sum to the all-ones
        // vector twice over); anything lower means an unlucky permutation.
        if (rank + 2 < m) continue;

        Generator g;
        g.n = n;
        g.k = k;
        g.rank = rank;
        g.cols = std::move(cols);
        g.words_per_row = (m + 63) / 64;
        g.parity_rows.assign(std::size_t(k) * g.words_per_row, 0);
        for (std::uint32_t j = 0; j < k; ++j) {
            std::uint64_t* prow = g.parity_rows.data() + std::size_t(j) * g.words_per_row;
            const std::uint32_t col = g.cols[j];
            for (std::uint32_t i = 0; i < rank; ++i)
                if (rows.bit(i, col)) prow[i / 64] ^= 1ULL << (i % 64);
        }
        return LdpcCode{std::move(h), std::move(g)};
    }
    throw ConstructionError("ldpc::build: rank deficiency persisted across 8 retries");
}

BitVec encode(const Generator& g, const BitVec& message) {
    if (message.size() != g.k)
        throw LengthError("ldpc::encode: message length " + std::to_string(message.size()) +
                          " != k = " + std::to_string(g.k));
    const std::uint32_t m = g.n - g.k;
    std::vector<std::uint64_t> acc(g.words_per_row, 0);
    for (std::uint32_t j = 0; j < g.k; ++j)
        if (message[j]) {
            const std::uint64_t* prow = g.parity_rows.data() + std::size_t(j) * g.words_per_row;
            for (std::uint32_t w = 0; w < g.words_per_row; ++w) acc[w] ^= prow[w];
        }
    BitVec cw(g.n, 0);
    for (std::uint32_t j = 0; j < g.k; ++j) cw[g.cols[j]] = message[j];
    for (std::uint32_t i = 0; i < m; ++i) cw[g.cols[g.k + i]] = (acc[i / 64] >> (i % 64)) & 1;
    return cw;
}

BitVec syndrome(const ParityCheck& h, const BitVec& word) {
    if (word.size() != h.n)
        throw LengthError("ldpc::syndrome: word length " + std::to_string(word.size()) +
                          " != n = " + std::to_string(h.n));
    BitVec s(h.m, 0);
    for (std::uint32_t c = 0; c < h.m; ++c) {
        std::uint8_t bit = 0;
        for (std::uint32_t col : h.row(c)) bit ^= word[col];
        s[c] = bit;
    }
    return s;
}

BitVec extract_message(const Generator& g, const BitVec& codeword) {
    if (codeword.size() != g.n) throw LengthError("ldpc::extract_message: wrong codeword length");
    BitVec msg(g.k);
    for (std::uint32_t j = 0; j < g.k; ++j) msg[j] = codeword[g.cols[j]];
    return msg;
}

DecodeResult decode(const ParityCheck& h, const SoftWord& soft, std::uint32_t max_iter) {
    const std::uint32_t n = h.n, m = h.m, n_edges = 6 * m;
    if (soft.values.size() != n) throw LengthError("ldpc::decode: soft word length != n");

    const double sigma2 = soft.sigma * soft.sigma;
    std::vector<double> llr(n);
    for (std::uint32_t v = 0; v < n; ++v) llr[v] = 2.0 * soft.values[v] / sigma2;

    // Per-variable edge incidence (exactly 3 per column).
    std::vector<std::uint32_t> var_edges(n_edges);
    {
        std::vector<std::uint32_t> fill(n, 0);
        for (std::uint32_t e = 0; e < n_edges; ++e) {
            const std::uint32_t v = h.entries[e];
            var_edges[std::size_t(3) * v + fill[v]++] = e;
        }
    }

    std::vector<double> total(n);
    BitVec hard(n);
    auto decide = [&] {
        for (std::uint32_t v = 0; v < n; ++v) hard[v] = total[v] > 0.0 ? 1 : 0;
    };
    auto satisfied = [&] {
        for (std::uint32_t c = 0; c < m; ++c) {
            std::uint8_t bit = 0;
            for (std::uint32_t col : h.row(c)) bit ^= hard[col];
            if (bit) return false;
        }
        return true;
    };

    total = llr;
    decide();
    if (satisfied()) return {std::move(hard), true, 0};

    constexpr double kClamp = 1.0 - 1e-12;
    std::vector<double> chk(n_edges, 0.0);
    std::vector<double> tanh_v2c(n_edges);

    for (std::uint32_t iter = 1; iter <= max_iter; ++iter) {
        for (std::uint32_t v = 0; v < n; ++v) {
            const std::uint32_t* ve = var_edges.data() + std::size_t(3) * v;
            const double t = llr[v] + chk[ve[0]] + chk[ve[1]] + chk[ve[2]];
            total[v] = t;
            tanh_v2c[ve[0]] = std::tanh(0.5 * (t - chk[ve[0]]));
            tanh_v2c[ve[1]] = std::tanh(0.5 * (t - chk[ve[1]]));
            tanh_v2c[ve[2]] = std::tanh(0.5 * (t - chk[ve[2]]));
        }
        for (std::uint32_t c = 0; c < m; ++c) {
            const std::uint32_t base = 6 * c;
            for (std::uint32_t u = 0; u < 6; ++u) {
                double prod = 1.0;
                for (std::uint32_t w = 0; w < 6; ++w)
                    if (w != u) prod *= tanh_v2c[base + w];
                prod = std::clamp(prod, -kClamp, kClamp);
                chk[base + u] = 2.0 * std::atanh(prod);
            }
        }
        for (std::uint32_t v = 0; v < n; ++v) {
            const std::uint32_t* ve = var_edges.data() + std::size_t(3) * v;
            total[v] = llr[v] + chk[ve[0]] + chk[ve[1]] + chk[ve[2]];
        }
        decide();
        if (satisfied()) return {std::move(hard), true, iter};
    }
    return {std::move(hard), false, max_iter};
}

}  // namespace specter::ldpc
