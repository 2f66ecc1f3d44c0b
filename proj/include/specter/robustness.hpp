#ifndef SPECTER_ROBUSTNESS_HPP
#define SPECTER_ROBUSTNESS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specter/bits.hpp"
#include "specter/cdma.hpp"

namespace specter::robustness {

/// Zeroes the floor(ratio * L) elements of smallest magnitude; ties zero the
/// lower index first.
void prune_magnitude(std::span<double> view, double ratio);

/// Zeroes a uniform random subset of floor(ratio * L) elements.
void prune_random(std::span<double> view, double ratio, std::uint64_t seed);

/// Permutes all elements. Extraction depends on weight ordering, so this is
/// guaranteed destruction; stands in for architectural pruning.
void shuffle(std::span<double> view, std::uint64_t seed);

/// Adds i.i.d. N(0, std^2) noise, Box-Muller over keystream words.
void add_noise(std::span<double> view, double std_dev, std::uint64_t seed);

/// f64 -> binary16 -> f64 on every element, round-to-nearest-even.
void quantize_roundtrip(std::span<double> view);

/// global + (alpha / n') * sum(updates).
std::vector<double> fedavg_round(std::span<const double> global,
                                 const std::vector<std::vector<double>>& updates, double alpha);

enum class Outcome { Ok, IntegrityFailure, NoSignal };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Ok: return "ok";
        case Outcome::IntegrityFailure: return "integrity_error";
        default: return "signal_not_found";
    }
}

struct AttackReport {
    std::string attack;
    std::string params;
    bool pre_signal = false;      // probe before the attack found a positive gain
    double pre_snr_db = 0;
    bool post_signal = false;
    double post_snr_db = 0;
    Outcome outcome = Outcome::NoSignal;
    std::size_t bit_errors = 0;   // pre-LDPC hard decisions vs re-encoded truth
    std::size_t codeword_bits = 0;
    Bytes recovered;              // only when outcome == Ok
};

struct FedAvgConfig {
    std::uint32_t participants = 10;
    std::uint32_t rounds = 1;
    double boost = 10.0;
    double update_std = 1e-3;
    double alpha = 1.0;
    std::uint64_t noise_seed = 1337;
};

/// One-shot federated embedding experiment: each round averages n'-1 benign
/// Gaussian updates with one adversarial update carrying boost times the
/// injection signal, then extraction runs against the resulting global model.
AttackReport fedavg_survival(std::span<const double> global, const Bytes& payload,
                             const cdma::EmbedParams& params, const FedAvgConfig& cfg);

}  // namespace specter::robustness

#endif
