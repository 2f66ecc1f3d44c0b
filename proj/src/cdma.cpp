#include "specter/cdma.hpp"

#include <cmath>
#include <string>

#include "specter/errors.hpp"
#include "specter/keystream.hpp"
#include "specter/parallel.hpp"

namespace specter::cdma {

void EmbedParams::validate() const {
    if (!unsafe_gamma && (gamma < 1e-5 || gamma > 9e-3))
        throw LengthError("gamma " + std::to_string(gamma) +
                          " outside [1e-5, 9e-3]; pass unsafe_gamma to override");
    if (gamma <= 0) throw LengthError("gamma must be positive");
    if (spreading_factor < 2) throw LengthError("spreading factor must be at least 2");
    if (bits_per_block < 1) throw LengthError("bits per block must be at least 1");
}

Layout plan(std::size_t host_len, std::size_t n_transmit, const EmbedParams& params) {
    params.validate();
    Layout layout;
    layout.host_len = host_len;
    layout.d = params.bits_per_block;
    layout.s = params.block_weights();
    if (host_len < layout.s)
        throw CapacityError("host of " + std::to_string(host_len) + " weights is smaller than one block (" +
                            std::to_string(layout.s) + ")");
    layout.n_blocks = host_len / layout.s;
    layout.capacity_bits = layout.n_blocks * layout.d;
    layout.n_transmit = n_transmit;
    if (n_transmit > layout.capacity_bits)
        throw CapacityError("payload needs " + std::to_string(n_transmit) + " transmitted bits but host capacity is " +
                            std::to_string(layout.capacity_bits));
    return layout;
}

std::vector<double> preamble_values(std::uint64_t seed) {
    const keystream::ChipStream stream{seed, keystream::CHIP_DOMAIN};
    std::vector<double> p(kPreambleSymbols);
    for (std::uint32_t i = 0; i < kPreambleSymbols; ++i) p[i] = stream.chip(i);
    return p;
}

void inject(std::span<double> host, std::span<const double> transmit, const EmbedParams& params,
            const Layout& layout) {
    if (transmit.size() != layout.n_transmit || transmit.size() > layout.capacity_bits)
        throw LengthError("inject: transmit length does not match layout");
    if (host.size() < layout.n_blocks * std::size_t(layout.s))
        throw LengthError("inject: host shorter than layout");

    const keystream::ChipStream stream{params.seed, keystream::CHIP_DOMAIN};
    const std::size_t s = layout.s, d = layout.d;
    const double gamma = params.gamma;

    // Blocks write disjoint weight ranges, so the block loop parallelizes.
    parallel_for(layout.used_blocks(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t block = begin; block < end; ++block) {
            double* w = host.data() + block * s;
            const std::size_t k_end = std::min<std::size_t>((block + 1) * d, transmit.size());
            for (std::size_t k = block * d; k < k_end; ++k) {
                const double amp = gamma * transmit[k];
                keystream::ChipCursor chips(stream, kPreambleSymbols + k * s);
                for (std::size_t t = 0; t < s; ++t) w[t] += amp * chips.next();
            }
        }
    });
}

std::vector<double> despread(std::span<const double> host, const EmbedParams& params, const Layout& layout,
                             std::size_t n_transmit) {
    if (n_transmit > layout.capacity_bits) throw LengthError("despread: n_transmit exceeds layout capacity");
    if (host.size() < layout.n_blocks * std::size_t(layout.s))
        throw LengthError("despread: host shorter than layout");

    const keystream::ChipStream stream{params.seed, keystream::CHIP_DOMAIN};
    const std::size_t s = layout.s, d = layout.d;
    std::vector<double> y(n_transmit);

    const std::size_t blocks = (n_transmit + d - 1) / d;
    parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
        for (std::size_t block = begin; block < end; ++block) {
            const double* w = host.data() + block * s;
            const std::size_t k_end = std::min<std::size_t>((block + 1) * d, n_transmit);
            for (std::size_t k = block * d; k < k_end; ++k) {
                keystream::ChipCursor chips(stream, kPreambleSymbols + k * s);
                double acc = 0.0;
                for (std::size_t t = 0; t < s; ++t) acc += chips.next() * w[t];
                y[k] = acc;
            }
        }
    });
    return y;
}

ChannelEstimate estimate(std::span<const double> y, std::uint64_t seed) {
    if (y.size() < kPreambleSymbols) throw LengthError("estimate: need at least the 200 preamble values");
    const std::vector<double> preamble = preamble_values(seed);

    ChannelEstimate est;
    double gain = 0.0;
    for (std::uint32_t i = 0; i < kPreambleSymbols; ++i) gain += y[i] * preamble[i];
    gain /= kPreambleSymbols;
    if (gain <= 0.0)
        throw SignalNotFound("preamble gain " + std::to_string(gain) +
                             " is not positive (wrong seed, wrong layout, or destroyed signal)");
    est.gain = gain;

    est.soft_preamble.resize(kPreambleSymbols);
    double mean = 0.0;
    for (std::uint32_t i = 0; i < kPreambleSymbols; ++i) {
        est.soft_preamble[i] = y[i] * preamble[i] / gain;
        mean += est.soft_preamble[i];
    }
    mean /= kPreambleSymbols;
    double var = 0.0;
    for (std::uint32_t i = 0; i < kPreambleSymbols; ++i) {
        const double dev = est.soft_preamble[i] - mean;
        var += dev * dev;
    }
    var /= kPreambleSymbols;  // population
    est.sigma = std::max(std::sqrt(var), 1e-6);
    est.snr_db = -20.0 * std::log10(est.sigma);

    est.soft_data.assign(y.begin() + kPreambleSymbols, y.end());
    for (double& v : est.soft_data) v /= gain;
    return est;
}

}  // namespace specter::cdma
