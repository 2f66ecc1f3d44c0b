#include "specter/detect.hpp"

#include <algorithm>
#include <cmath>

#include "specter/errors.hpp"
#include "specter/keystream.hpp"

namespace specter::detect {

namespace {

// Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), truncated when
// terms drop below 1e-12, clamped to [0, 1].
double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    const double a = -2.0 * lambda * lambda;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 100000; ++k) {
        const double term = std::exp(a * double(k) * double(k));
        if (term < 1e-12) break;
        sum += sign * term;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw TooFewSamples("ks_two_sample: need at least 2 samples per side");

    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double n1 = double(sa.size()), n2 = double(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        d = std::max(d, std::fabs(double(i) / n1 - double(j) / n2));
    }
    // Once one sample is exhausted the ECDF gap only shrinks toward the final
    // |1 - 1| = 0, so the scan above saw the supremum.

    KsResult r;
    r.n1 = sa.size();
    r.n2 = sb.size();
    r.d_stat = d;
    const double ne = n1 * n2 / (n1 + n2);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    r.p_value = kolmogorov_q(lambda);
    return r;
}

DistributionReport distribution_report(std::span<const double> samples) {
    if (samples.size() < 2) throw TooFewSamples("distribution_report: need at least 2 samples");
    const double n = double(samples.size());

    DistributionReport rep;
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    rep.mean = mean;
    rep.stddev = std::sqrt(m2);
    if (m2 > 0.0) {
        rep.skewness = m3 / std::pow(m2, 1.5);
        rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t q = 0; q < kQuantileProbs.size(); ++q) {
        const double pos = kQuantileProbs[q] * (n - 1.0);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - double(lo);
        rep.quantiles[q] = sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    }
    return rep;
}

std::vector<double> pure_signal_sample(std::uint64_t seed, const cdma::EmbedParams& params, std::size_t count) {
    const keystream::ChipStream stream{seed, keystream::CHIP_DOMAIN};
    keystream::ChipCursor chips(stream, 0);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        long sum = 0;
        for (std::uint32_t u = 0; u < params.bits_per_block; ++u) sum += chips.next();
        out[i] = params.gamma * double(sum);
    }
    return out;
}

}  // namespace specter::detect
