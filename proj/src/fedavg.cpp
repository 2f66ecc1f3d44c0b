#include <cmath>
#include <sstream>

#include "specter/cdma.hpp"
#include "specter/errors.hpp"
#include "specter/keystream.hpp"
#include "specter/pipeline.hpp"
#include "specter/robustness.hpp"

namespace specter::robustness {

namespace {

// Channel estimate on a bare weight view; empty on non-positive gain.
bool probe_view(std::span<const double> view, const cdma::EmbedParams& params, double& snr_db) {
    try {
        const cdma::Layout layout = cdma::plan(view.size(), cdma::kPreambleSymbols, params);
        const auto y = cdma::despread(view, params, layout, cdma::kPreambleSymbols);
        snr_db = cdma::estimate(y, params.seed).snr_db;
        return true;
    } catch (const SignalNotFound&) {
        return false;
    }
}

}  // namespace

AttackReport fedavg_survival(std::span<const double> global, const Bytes& payload,
                             const cdma::EmbedParams& params, const FedAvgConfig& cfg) {
    if (cfg.participants < 1) throw LengthError("fedavg: need at least one participant");
    if (cfg.boost <= 0.0) throw LengthError("fedavg: boost must be positive");

    const std::vector<double> symbols = pipeline::transmit_symbols(payload, params);
    const cdma::Layout layout = cdma::plan(global.size(), symbols.size(), params);

    // The pure Eq.-1 signal; the adversarial update is boost times this.
    std::vector<double> signal(global.size(), 0.0);
    cdma::inject(signal, symbols, params, layout);

    AttackReport report;
    report.attack = "fedavg";
    {
        std::ostringstream os;
        os << "participants=" << cfg.participants << " boost=" << cfg.boost << " update_std=" << cfg.update_std
           << " rounds=" << cfg.rounds << " alpha=" << cfg.alpha;
        report.params = os.str();
    }
    report.codeword_bits = symbols.size() - cdma::kPreambleSymbols;

    // Pre view: the adversary's own stego update applied to the global model.
    {
        std::vector<double> local(global.begin(), global.end());
        for (std::size_t i = 0; i < local.size(); ++i) local[i] += cfg.boost * signal[i];
        report.pre_signal = probe_view(local, params, report.pre_snr_db);
    }

    std::vector<double> model(global.begin(), global.end());
    std::vector<double> update_sum(model.size());
    for (std::uint32_t round = 0; round < cfg.rounds; ++round) {
        std::fill(update_sum.begin(), update_sum.end(), 0.0);
        for (std::uint32_t p = 0; p + 1 < cfg.participants; ++p) {
            const std::uint64_t upd_seed =
                keystream::word(cfg.noise_seed, keystream::CHIP_DOMAIN,
                                std::uint64_t(round) * cfg.participants + p);
            add_noise(update_sum, cfg.update_std, upd_seed);
        }
        const double scale = cfg.alpha / double(cfg.participants);
        for (std::size_t i = 0; i < model.size(); ++i)
            model[i] += scale * (update_sum[i] + cfg.boost * signal[i]);
    }

    report.post_signal = probe_view(model, params, report.post_snr_db);

    // Distribute the averaged model at f32 like a real parameter server would,
    // then run the ordinary extraction against it.
    tensorstore::Tensor t;
    t.name = "w";
    t.dtype = tensorstore::DType::F32;
    t.shape = {static_cast<std::uint32_t>(model.size())};
    t.data.resize(model.size() * 4);
    tensorstore::TensorStore store;
    store.add(std::move(t));
    tensorstore::FlatView view;
    view.values = std::move(model);
    view.segments.push_back({0, 0, view.values.size()});
    store = tensorstore::scatter(store, view);

    try {
        report.recovered = pipeline::extract(store, params.seed, payload.size(), params);
        report.outcome = Outcome::Ok;
    } catch (const IntegrityError&) {
        report.outcome = Outcome::IntegrityFailure;
    } catch (const SignalNotFound&) {
        report.outcome = Outcome::NoSignal;
    }

    // Pre-LDPC hard-decision errors against the re-encoded truth.
    try {
        const tensorstore::FlatView final_view = tensorstore::gather(store);
        const auto y = cdma::despread(final_view.values, params, layout, symbols.size());
        const cdma::ChannelEstimate est = cdma::estimate(y, params.seed);
        for (std::size_t i = 0; i < est.soft_data.size(); ++i) {
            const double truth = symbols[cdma::kPreambleSymbols + i];
            if ((est.soft_data[i] > 0.0 ? 1.0 : -1.0) != truth) ++report.bit_errors;
        }
    } catch (const SignalNotFound&) {
        report.bit_errors = report.codeword_bits;  // nothing recoverable
    }
    return report;
}

}  // namespace specter::robustness
