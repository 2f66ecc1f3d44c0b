#ifndef SPECTER_PIPELINE_HPP
#define SPECTER_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "specter/bits.hpp"
#include "specter/cdma.hpp"
#include "specter/detect.hpp"
#include "specter/tensorstore.hpp"

namespace specter::pipeline {

/// Everything extraction needs travels out of band (seed, payload length,
/// shape parameters); nothing is stored inside the host.
struct EmbedRecord {
    cdma::EmbedParams params;
    std::size_t payload_len = 0;
    std::size_t message_bits = 0;    // 8 * payload_len + 256
    std::size_t ldpc_blocks = 0;
    std::size_t codeword_bits = 0;
    std::size_t transmit_bits = 0;   // 200 + codeword_bits
    std::size_t blocks_used = 0;
    std::size_t weights_touched = 0;
    detect::DistributionReport pre;
    detect::DistributionReport post;
};

/// Number of codeword bits a payload of the given length produces: the framed
/// message is chunked into k-bit LDPC messages (k = ldpc_n / 2), the last one
/// zero-padded.
std::size_t codeword_bits(std::size_t payload_len, const cdma::EmbedParams& params);

struct EmbedResult {
    tensorstore::TensorStore store;
    EmbedRecord record;
};

/// frame -> LDPC encode per chunk -> preamble + codeword as +-1 symbols ->
/// spread-spectrum inject -> scatter back at host precision.
EmbedResult embed(const tensorstore::TensorStore& host, const Bytes& payload,
                  const cdma::EmbedParams& params, const std::string& filter = "");

/// gather -> despread -> channel estimate -> per-block BP decode with the
/// global sigma -> digest check. force = true returns best-effort bytes on a
/// digest mismatch instead of throwing IntegrityError.
Bytes extract(const tensorstore::TensorStore& host, std::uint64_t seed, std::size_t payload_len,
              const cdma::EmbedParams& params, const std::string& filter = "", bool force = false);

struct ProbeResult {
    double gain = 0;
    double sigma = 0;
    double snr_db = 0;
};

/// Despreads only the 200 preamble positions and estimates the channel; no
/// payload length required.
ProbeResult probe(const tensorstore::TensorStore& host, std::uint64_t seed,
                  const cdma::EmbedParams& params, const std::string& filter = "");

/// Synthetic Gaussian host: one tensor "w" of the requested dtype.
tensorstore::TensorStore generate_host(std::size_t len, double std_dev, std::uint64_t seed,
                                       tensorstore::DType dtype = tensorstore::DType::F32);

/// Deterministic byte string from keystream words (8 LE bytes each); the
/// stock payload generator for experiments.
Bytes keystream_bytes(std::uint64_t seed, std::size_t count);

/// Full +-1 transmit vector (preamble then codeword symbols) for a payload;
/// shared by embed and by ground-truth bit-error accounting in attacks.
std::vector<double> transmit_symbols(const Bytes& payload, const cdma::EmbedParams& params);

}  // namespace specter::pipeline

#endif
