#ifndef SPECTER_CDMA_HPP
#define SPECTER_CDMA_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace specter::cdma {

/// Injection parameters. gamma is the per-chip amplitude; the accepted range
/// follows the grid the construction was tuned on and can only be left
/// explicitly (the CLI --unsafe-gamma flag).
struct EmbedParams {
    std::uint64_t seed = 42;
    double gamma = 2e-3;
    std::uint32_t spreading_factor = 6;   // s / d
    std::uint32_t bits_per_block = 100;   // d
    std::uint32_t ldpc_n = 2048;
    bool unsafe_gamma = false;

    std::uint32_t block_weights() const { return spreading_factor * bits_per_block; }  // s

    /// Throws CapacityError-free validation errors (LengthError) on bad shape
    /// values; gamma outside [1e-5, 9e-3] throws unless unsafe_gamma.
    void validate() const;
};

constexpr std::uint32_t kPreambleSymbols = 200;

/// Deterministic partition of the flattened host: contiguous blocks of
/// s = SF*d weights, d transmitted elements per block. Element k lives in
/// block k/d and is spread with chips [200 + k*s, 200 + (k+1)*s).
struct Layout {
    std::size_t host_len = 0;
    std::uint32_t d = 0;
    std::uint32_t s = 0;
    std::size_t n_blocks = 0;       // floor(host_len / s)
    std::size_t capacity_bits = 0;  // n_blocks * d
    std::size_t n_transmit = 0;     // preamble symbols + codeword bits

    std::size_t used_blocks() const { return (n_transmit + d - 1) / d; }
    std::size_t touched_weights() const { return used_blocks() * s; }
};

/// Plans the block layout; throws CapacityError when n_transmit does not fit.
Layout plan(std::size_t host_len, std::size_t n_transmit, const EmbedParams& params);

/// The 200 known preamble symbol values: chips 0..199 of CHIP_DOMAIN.
std::vector<double> preamble_values(std::uint64_t seed);

/// Adds gamma * chip * symbol over each transmitted element's block, in f64.
/// transmit holds +-1 symbol values, preamble first. Weights outside the used
/// blocks are untouched.
void inject(std::span<double> host, std::span<const double> transmit, const EmbedParams& params,
            const Layout& layout);

/// Correlates each element's spreading code with its block: y[k] = sum_t
/// chip * w. On a clean injection over a zero host this returns s*gamma*b
/// exactly.
std::vector<double> despread(std::span<const double> host, const EmbedParams& params, const Layout& layout,
                             std::size_t n_transmit);

/// Preamble-based channel estimate, Algorithm-2 style.
struct ChannelEstimate {
    double gain = 0;      // estimate of s*gamma
    double sigma = 0;     // normalized noise std, clamped to >= 1e-6
    double snr_db = 0;    // -20 log10(sigma)
    std::vector<double> soft_preamble;  // y[0:200] / gain
    std::vector<double> soft_data;      // y[200:] / gain
};

/// gain = mean(y[:200] * preamble); sigma = population std of the normalized
/// preamble; throws SignalNotFound when gain <= 0.
ChannelEstimate estimate(std::span<const double> y, std::uint64_t seed);

}  // namespace specter::cdma

#endif
