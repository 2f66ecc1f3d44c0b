#include "specter/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "specter/errors.hpp"
#include "specter/half.hpp"
#include "specter/keystream.hpp"
#include "specter/parallel.hpp"

namespace specter::robustness {

void prune_magnitude(std::span<double> view, double ratio) {
    if (ratio < 0.0 || ratio >= 1.0) throw LengthError("prune ratio must be in [0, 1)");
    const std::size_t count = static_cast<std::size_t>(ratio * double(view.size()));
    if (count == 0) return;

    std::vector<std::size_t> order(view.size());
    std::iota(order.begin(), order.end(), 0);
    auto smaller = [&](std::size_t a, std::size_t b) {
        const double ma = std::fabs(view[a]), mb = std::fabs(view[b]);
        return ma != mb ? ma < mb : a < b;
    };
    std::nth_element(order.begin(), order.begin() + count, order.end(), smaller);
    for (std::size_t i = 0; i < count; ++i) view[order[i]] = 0.0;
}

void prune_random(std::span<double> view, double ratio, std::uint64_t seed) {
    if (ratio < 0.0 || ratio >= 1.0) throw LengthError("prune ratio must be in [0, 1)");
    const std::size_t count = static_cast<std::size_t>(ratio * double(view.size()));
    if (count == 0) return;
    const keystream::ChipStream stream{seed, keystream::CHIP_DOMAIN};
    const auto perm = keystream::permutation(stream, 0, static_cast<std::uint32_t>(view.size()));
    for (std::size_t i = 0; i < count; ++i) view[perm[i]] = 0.0;
}

void shuffle(std::span<double> view, std::uint64_t seed) {
    const keystream::ChipStream stream{seed, keystream::CHIP_DOMAIN};
    const auto perm = keystream::permutation(stream, 0, static_cast<std::uint32_t>(view.size()));
    std::vector<double> shuffled(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) shuffled[i] = view[perm[i]];
    std::copy(shuffled.begin(), shuffled.end(), view.begin());
}

void add_noise(std::span<double> view, double std_dev, std::uint64_t seed) {
    if (std_dev < 0.0) throw LengthError("noise std must be non-negative");
    if (std_dev == 0.0 || view.empty()) return;
    const keystream::ChipStream stream{seed, keystream::CHIP_DOMAIN};

    // Box-Muller, two stream words per pair: u = (word + 1) / 2^64 in (0, 1].
    parallel_for((view.size() + 1) / 2, [&](std::size_t begin, std::size_t end) {
        for (std::size_t pair = begin; pair < end; ++pair) {
            const std::uint64_t w1 = keystream::word(stream.seed, stream.domain, 2 * pair);
            const std::uint64_t w2 = keystream::word(stream.seed, stream.domain, 2 * pair + 1);
            const double u1 = std::min(double(w1) * 0x1p-64 + 0x1p-64, 1.0);
            const double u2 = std::min(double(w2) * 0x1p-64 + 0x1p-64, 1.0);
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double theta = 2.0 * std::numbers::pi * u2;
            view[2 * pair] += std_dev * r * std::cos(theta);
            if (2 * pair + 1 < view.size()) view[2 * pair + 1] += std_dev * r * std::sin(theta);
        }
    });
}

void quantize_roundtrip(std::span<double> view) {
    parallel_for(view.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) view[i] = f16_to_f64(f64_to_f16(view[i]));
    });
}

std::vector<double> fedavg_round(std::span<const double> global,
                                 const std::vector<std::vector<double>>& updates, double alpha) {
    if (updates.empty()) throw LengthError("fedavg_round: need at least one update");
    for (const auto& u : updates)
        if (u.size() != global.size()) throw LengthError("fedavg_round: update length mismatch");
    std::vector<double> next(global.begin(), global.end());
    const double scale = alpha / double(updates.size());
    for (const auto& u : updates)
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += scale * u[i];
    return next;
}

}  // namespace specter::robustness
