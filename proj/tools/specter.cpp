// specter: spread-spectrum payload embedding in tensor stores, with
// robustness attacks and statistical detectability reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "specter/detect.hpp"
#include "specter/errors.hpp"
#include "specter/pipeline.hpp"
#include "specter/robustness.hpp"
#include "specter/tensorstore.hpp"

using json = nlohmann::json;
using namespace specter;
namespace ts = specter::tensorstore;

namespace {

Bytes read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_bytes(const Bytes& bytes, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw FormatError("short write to '" + path + "'");
}

json to_json(const detect::DistributionReport& rep) {
    json q;
    for (std::size_t i = 0; i < detect::kQuantileProbs.size(); ++i)
        q[std::to_string(detect::kQuantileProbs[i])] = rep.quantiles[i];
    return {{"mean", rep.mean},
            {"std", rep.stddev},
            {"skewness", rep.skewness},
            {"excess_kurtosis", rep.excess_kurtosis},
            {"quantiles", q}};
}

json to_json(const robustness::AttackReport& rep) {
    json j{{"attack", rep.attack},
           {"params", rep.params},
           {"pre_signal", rep.pre_signal},
           {"post_signal", rep.post_signal},
           {"outcome", robustness::outcome_name(rep.outcome)},
           {"bit_errors_pre_ldpc", rep.bit_errors},
           {"codeword_bits", rep.codeword_bits}};
    if (rep.pre_signal) j["pre_snr_db"] = rep.pre_snr_db;
    if (rep.post_signal) j["post_snr_db"] = rep.post_snr_db;
    return j;
}

struct ShapeFlags {
    cdma::EmbedParams params;
    std::string filter;

    void attach(CLI::App* cmd, bool with_gamma) {
        cmd->add_option("--seed", params.seed, "keystream seed");
        if (with_gamma) {
            cmd->add_option("--gamma", params.gamma, "injection amplitude per chip");
            cmd->add_flag("--unsafe-gamma", params.unsafe_gamma, "allow gamma outside [1e-5, 9e-3]");
        }
        cmd->add_option("--sf", params.spreading_factor, "spreading factor (weights per bit / d)");
        cmd->add_option("--bits-per-block", params.bits_per_block, "bits carried by one block");
        cmd->add_option("--ldpc-n", params.ldpc_n, "LDPC codeword length");
        cmd->add_option("--filter", filter, "glob over tensor names selecting the host weights");
    }
};

int run(int argc, char** argv) {
    CLI::App app{"spread-spectrum payload embedding toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    // gen-host
    auto* gen = app.add_subcommand("gen-host", "write a synthetic Gaussian host store");
    std::size_t gen_len = 0;
    double gen_std = 0.02;
    std::uint64_t gen_seed = 7;
    std::string gen_out, gen_dtype = "f32";
    gen->add_option("--len", gen_len, "weight count")->required();
    gen->add_option("--std", gen_std, "weight standard deviation");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--dtype", gen_dtype, "f32 or f16")->check(CLI::IsMember({"f32", "f16"}));
    gen->add_option("--out", gen_out, "output store path")->required();
    gen->callback([&] {
        const auto dtype = gen_dtype == "f16" ? ts::DType::F16 : ts::DType::F32;
        ts::write_file(pipeline::generate_host(gen_len, gen_std, gen_seed, dtype), gen_out);
    });

    // embed
    auto* embed = app.add_subcommand("embed", "inject a payload into a host store");
    ShapeFlags embed_shape;
    std::string embed_host, embed_payload, embed_out;
    embed->add_option("--host", embed_host, "input host store")->required();
    embed->add_option("--payload", embed_payload, "payload file")->required();
    embed->add_option("--out", embed_out, "output stego store")->required();
    embed_shape.attach(embed, true);
    embed->callback([&] {
        const auto host = ts::read_file(embed_host);
        const Bytes payload = read_bytes(embed_payload);
        const auto result = pipeline::embed(host, payload, embed_shape.params, embed_shape.filter);
        ts::write_file(result.store, embed_out);
        const auto& r = result.record;
        json j{{"payload_len", r.payload_len},   {"message_bits", r.message_bits},
               {"ldpc_blocks", r.ldpc_blocks},   {"codeword_bits", r.codeword_bits},
               {"transmit_bits", r.transmit_bits}, {"blocks_used", r.blocks_used},
               {"weights_touched", r.weights_touched}, {"pre", to_json(r.pre)},
               {"post", to_json(r.post)}};
        std::cout << j.dump() << "\n";
    });

    // extract
    auto* extract = app.add_subcommand("extract", "recover a payload from a stego store");
    ShapeFlags ex_shape;
    std::string ex_host, ex_out;
    std::size_t ex_len = 0;
    bool ex_force = false;
    extract->add_option("--host", ex_host, "stego store")->required();
    extract->add_option("--payload-len", ex_len, "payload length in bytes")->required();
    extract->add_option("--out", ex_out, "recovered payload path")->required();
    extract->add_flag("--force", ex_force, "write best-effort bytes even on digest mismatch");
    ex_shape.attach(extract, false);
    extract->callback([&] {
        const auto host = ts::read_file(ex_host);
        try {
            write_bytes(pipeline::extract(host, ex_shape.params.seed, ex_len, ex_shape.params, ex_shape.filter),
                        ex_out);
        } catch (const IntegrityError&) {
            if (!ex_force) throw;
            write_bytes(
                pipeline::extract(host, ex_shape.params.seed, ex_len, ex_shape.params, ex_shape.filter, true),
                ex_out);
            std::cerr << "digest mismatch: wrote best-effort bytes\n";
            rc = 2;
        }
    });

    // probe
    auto* probe = app.add_subcommand("probe", "estimate gain/sigma/SNR from the preamble");
    ShapeFlags pr_shape;
    std::string pr_host;
    probe->add_option("--host", pr_host, "store to probe")->required();
    pr_shape.attach(probe, false);
    probe->callback([&] {
        const auto result = pipeline::probe(ts::read_file(pr_host), pr_shape.params.seed, pr_shape.params,
                                            pr_shape.filter);
        std::cout << json{{"gain", result.gain}, {"sigma", result.sigma}, {"snr_db", result.snr_db}}.dump()
                  << "\n";
    });

    // attack
    auto* attack = app.add_subcommand("attack", "perturb a store in place");
    attack->require_subcommand(1);
    std::string at_in, at_out, at_mode = "magnitude";
    double at_ratio = 0.5, at_std = 0.02;
    std::uint64_t at_seed = 1;

    auto* prune = attack->add_subcommand("prune", "zero a subset of weights");
    prune->add_option("--mode", at_mode, "magnitude | random | shuffle")
        ->check(CLI::IsMember({"magnitude", "random", "shuffle"}));
    prune->add_option("--ratio", at_ratio, "fraction to zero, in [0,1)");
    prune->add_option("--seed", at_seed, "seed for random/shuffle modes");
    prune->add_option("--in", at_in)->required();
    prune->add_option("--out", at_out)->required();
    prune->callback([&] {
        auto store = ts::read_file(at_in);
        auto view = ts::gather(store);
        if (at_mode == "magnitude")
            robustness::prune_magnitude(view.values, at_ratio);
        else if (at_mode == "random")
            robustness::prune_random(view.values, at_ratio, at_seed);
        else
            robustness::shuffle(view.values, at_seed);
        ts::write_file(ts::scatter(store, view), at_out);
    });

    auto* noise = attack->add_subcommand("noise", "add Gaussian noise to all weights");
    noise->add_option("--std", at_std, "noise standard deviation")->required();
    noise->add_option("--seed", at_seed, "noise seed");
    noise->add_option("--in", at_in)->required();
    noise->add_option("--out", at_out)->required();
    noise->callback([&] {
        auto store = ts::read_file(at_in);
        auto view = ts::gather(store);
        robustness::add_noise(view.values, at_std, at_seed);
        ts::write_file(ts::scatter(store, view), at_out);
    });

    auto* quant = attack->add_subcommand("quantize", "round every weight through binary16");
    quant->add_option("--in", at_in)->required();
    quant->add_option("--out", at_out)->required();
    quant->callback([&] {
        auto store = ts::read_file(at_in);
        auto view = ts::gather(store);
        robustness::quantize_roundtrip(view.values);
        ts::write_file(ts::scatter(store, view), at_out);
    });

    // fedavg
    auto* fed = app.add_subcommand("fedavg", "federated-averaging survival experiment");
    ShapeFlags fed_shape;
    robustness::FedAvgConfig fed_cfg;
    std::string fed_payload;
    std::size_t fed_host_len = 10'000'000;
    double fed_host_std = 0.02;
    std::uint64_t fed_host_seed = 7;
    fed->add_option("--participants", fed_cfg.participants, "participants per round");
    fed->add_option("--boost", fed_cfg.boost, "adversarial update multiplier");
    fed->add_option("--update-std", fed_cfg.update_std, "benign update std");
    fed->add_option("--rounds", fed_cfg.rounds, "averaging rounds");
    fed->add_option("--alpha", fed_cfg.alpha, "server learning rate");
    fed->add_option("--noise-seed", fed_cfg.noise_seed, "benign update seed");
    fed->add_option("--payload", fed_payload, "payload file (default: 1 KiB of keystream bytes)");
    fed->add_option("--host-len", fed_host_len, "global model weight count");
    fed->add_option("--host-std", fed_host_std, "global model weight std");
    fed->add_option("--host-seed", fed_host_seed, "global model seed");
    fed_shape.attach(fed, true);
    fed->callback([&] {
        const Bytes payload =
            fed_payload.empty() ? pipeline::keystream_bytes(9, 1024) : read_bytes(fed_payload);
        const auto host = pipeline::generate_host(fed_host_len, fed_host_std, fed_host_seed);
        const auto view = ts::gather(host);
        const auto report = robustness::fedavg_survival(view.values, payload, fed_shape.params, fed_cfg);
        json j = to_json(report);
        j["recovered_matches"] = report.outcome == robustness::Outcome::Ok && report.recovered == payload;
        std::cout << j.dump() << "\n";
    });

    // analyze ks
    auto* analyze = app.add_subcommand("analyze", "statistical detectability reports");
    analyze->require_subcommand(1);
    auto* ks = analyze->add_subcommand("ks", "two-sample Kolmogorov-Smirnov over two stores");
    std::string ks_a, ks_b;
    ks->add_option("--a", ks_a)->required();
    ks->add_option("--b", ks_b)->required();
    ks->callback([&] {
        const auto va = ts::gather(ts::read_file(ks_a));
        const auto vb = ts::gather(ts::read_file(ks_b));
        const auto r = detect::ks_two_sample(va.values, vb.values);
        json j{{"ks", {{"d_stat", r.d_stat}, {"p_value", r.p_value}, {"n1", r.n1}, {"n2", r.n2}}},
               {"a", to_json(detect::distribution_report(va.values))},
               {"b", to_json(detect::distribution_report(vb.values))}};
        std::cout << j.dump() << "\n";
    });

    // inspect
    auto* inspect = app.add_subcommand("inspect", "dump store header as JSON lines");
    std::string ins_path;
    inspect->add_option("path", ins_path, "store file")->required();
    inspect->callback([&] {
        const auto store = ts::read_file(ins_path);
        std::cout << json{{"tensor_count", store.tensors.size()}}.dump() << "\n";
        for (const auto& t : store.tensors) {
            std::cout << json{{"name", t.name},
                              {"dtype", ts::dtype_name(t.dtype)},
                              {"shape", t.shape},
                              {"elements", t.element_count()},
                              {"data_bytes", t.data.size()}}
                             .dump()
                      << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 64;  // 64 for any usage problem, 0 for --help
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const SignalNotFound& e) {
        std::cerr << "signal not found: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 4;
    } catch (const EmptyPayload& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const LengthError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
