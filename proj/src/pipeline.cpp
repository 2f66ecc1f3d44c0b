#include "specter/pipeline.hpp"

#include <cmath>

#include "specter/errors.hpp"
#include "specter/framing.hpp"
#include "specter/keystream.hpp"
#include "specter/ldpc.hpp"
#include "specter/parallel.hpp"
#include "specter/robustness.hpp"

namespace specter::pipeline {

namespace {

std::size_t ldpc_block_count(std::size_t payload_len, const cdma::EmbedParams& params) {
    const std::size_t k = params.ldpc_n / 2;
    return (framing::framed_bits(payload_len) + k - 1) / k;
}

}  // namespace

std::size_t codeword_bits(std::size_t payload_len, const cdma::EmbedParams& params) {
    return ldpc_block_count(payload_len, params) * params.ldpc_n;
}

std::vector<double> transmit_symbols(const Bytes& payload, const cdma::EmbedParams& params) {
    const framing::FramedMessage framed = framing::frame(payload);
    const std::size_t k = params.ldpc_n / 2;
    const std::size_t blocks = ldpc_block_count(payload.size(), params);

    const ldpc::LdpcCode code = ldpc::build(params.seed, params.ldpc_n);

    std::vector<double> symbols = cdma::preamble_values(params.seed);
    symbols.resize(cdma::kPreambleSymbols + blocks * params.ldpc_n);
    parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            BitVec message(k, 0);  // final chunk zero-padded
            const std::size_t offset = b * k;
            const std::size_t take = std::min(k, framed.bits.size() - std::min(offset, framed.bits.size()));
            for (std::size_t i = 0; i < take; ++i) message[i] = framed.bits[offset + i];
            const BitVec cw = ldpc::encode(code.g, message);
            double* out = symbols.data() + cdma::kPreambleSymbols + b * params.ldpc_n;
            for (std::size_t i = 0; i < cw.size(); ++i) out[i] = cw[i] ? +1.0 : -1.0;
        }
    });
    return symbols;
}

EmbedResult embed(const tensorstore::TensorStore& host, const Bytes& payload,
                  const cdma::EmbedParams& params, const std::string& filter) {
    params.validate();
    const std::vector<double> symbols = transmit_symbols(payload, params);

    tensorstore::FlatView view = tensorstore::gather(host, filter);
    const cdma::Layout layout = cdma::plan(view.values.size(), symbols.size(), params);

    EmbedResult result;
    result.record.params = params;
    result.record.payload_len = payload.size();
    result.record.message_bits = framing::framed_bits(payload.size());
    result.record.ldpc_blocks = ldpc_block_count(payload.size(), params);
    result.record.codeword_bits = result.record.ldpc_blocks * params.ldpc_n;
    result.record.transmit_bits = symbols.size();
    result.record.blocks_used = layout.used_blocks();
    result.record.weights_touched = layout.touched_weights();
    result.record.pre = detect::distribution_report(view.values);

    cdma::inject(view.values, symbols, params, layout);
    result.record.post = detect::distribution_report(view.values);
    result.store = tensorstore::scatter(host, view);
    return result;
}

Bytes extract(const tensorstore::TensorStore& host, std::uint64_t seed, std::size_t payload_len,
              const cdma::EmbedParams& params_in, const std::string& filter, bool force) {
    if (payload_len == 0) throw EmptyPayload("extract: payload length must be at least one byte");
    cdma::EmbedParams params = params_in;
    params.seed = seed;
    params.validate();

    const tensorstore::FlatView view = tensorstore::gather(host, filter);
    const std::size_t cw_bits = codeword_bits(payload_len, params);
    const std::size_t n_transmit = cdma::kPreambleSymbols + cw_bits;
    const cdma::Layout layout = cdma::plan(view.values.size(), n_transmit, params);

    const std::vector<double> y = cdma::despread(view.values, params, layout, n_transmit);
    const cdma::ChannelEstimate est = cdma::estimate(y, seed);

    const ldpc::LdpcCode code = ldpc::build(seed, params.ldpc_n);
    const std::size_t k = params.ldpc_n / 2;
    const std::size_t blocks = cw_bits / params.ldpc_n;

    BitVec message_bits(blocks * k);
    parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            ldpc::SoftWord soft;
            soft.sigma = est.sigma;
            soft.values.assign(est.soft_data.begin() + b * params.ldpc_n,
                               est.soft_data.begin() + (b + 1) * params.ldpc_n);
            const ldpc::DecodeResult dec = ldpc::decode(code.h, soft, 50);
            const BitVec msg = ldpc::extract_message(code.g, dec.bits);
            std::copy(msg.begin(), msg.end(), message_bits.begin() + b * k);
        }
    });

    message_bits.resize(framing::framed_bits(payload_len));  // drop pad bits
    if (force) {
        try {
            return framing::verify(message_bits, payload_len);
        } catch (const IntegrityError&) {
            return framing::payload_bytes_unchecked(message_bits, payload_len);
        }
    }
    return framing::verify(message_bits, payload_len);
}

ProbeResult probe(const tensorstore::TensorStore& host, std::uint64_t seed,
                  const cdma::EmbedParams& params_in, const std::string& filter) {
    cdma::EmbedParams params = params_in;
    params.seed = seed;
    params.validate();
    const tensorstore::FlatView view = tensorstore::gather(host, filter);
    const cdma::Layout layout = cdma::plan(view.values.size(), cdma::kPreambleSymbols, params);
    const std::vector<double> y = cdma::despread(view.values, params, layout, cdma::kPreambleSymbols);
    const cdma::ChannelEstimate est = cdma::estimate(y, seed);
    return {est.gain, est.sigma, est.snr_db};
}

tensorstore::TensorStore generate_host(std::size_t len, double std_dev, std::uint64_t seed,
                                       tensorstore::DType dtype) {
    std::vector<double> values(len, 0.0);
    robustness::add_noise(values, std_dev, seed);

    tensorstore::Tensor t;
    t.name = "w";
    t.dtype = dtype;
    t.shape = {static_cast<std::uint32_t>(len)};
    t.data.resize(len * tensorstore::dtype_size(dtype));
    tensorstore::TensorStore store;
    store.add(std::move(t));

    tensorstore::FlatView view;
    view.values = std::move(values);
    view.segments.push_back({0, 0, len});
    return tensorstore::scatter(store, view);
}

Bytes keystream_bytes(std::uint64_t seed, std::size_t count) {
    Bytes out(count);
    for (std::size_t i = 0; i < count; i += 8) {
        const std::uint64_t w = keystream::word(seed, keystream::CHIP_DOMAIN, i / 8);
        for (std::size_t b = 0; b < 8 && i + b < count; ++b)
            out[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
    }
    return out;
}

}  // namespace specter::pipeline
