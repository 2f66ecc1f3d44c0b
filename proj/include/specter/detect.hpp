#ifndef SPECTER_DETECT_HPP
#define SPECTER_DETECT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "specter/cdma.hpp"

namespace specter::detect {

struct KsResult {
    double d_stat = 0;
    double p_value = 1;
    std::size_t n1 = 0, n2 = 0;
};

/// Two-sample Kolmogorov-Smirnov test: exact sup of the ECDF difference by
/// merge scan (ties advance both CDFs before comparing), asymptotic p-value
/// Q((sqrt(n_e) + 0.12 + 0.11/sqrt(n_e)) * d). Throws TooFewSamples below two
/// samples per side.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

constexpr std::array<double, 7> kQuantileProbs = {0.001, 0.01, 0.25, 0.5, 0.75, 0.99, 0.999};

struct DistributionReport {
    double mean = 0;
    double stddev = 0;            // population
    double skewness = 0;          // 0 by convention for constant samples
    double excess_kurtosis = 0;   // likewise
    std::array<double, 7> quantiles{};  // at kQuantileProbs, linear interpolation
};

DistributionReport distribution_report(std::span<const double> samples);

/// Per-weight perturbation a pure injection would leave: gamma-scaled sums of
/// d chips. Comparing a suspect host against this reproduces the binomiality
/// probe (reported, never asserted).
std::vector<double> pure_signal_sample(std::uint64_t seed, const cdma::EmbedParams& params, std::size_t count);

}  // namespace specter::detect

#endif
