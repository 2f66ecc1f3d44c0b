#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "specter/errors.hpp"
#include "specter/half.hpp"
#include "specter/tensorstore.hpp"

using namespace specter;
namespace ts = specter::tensorstore;

namespace {

ts::Tensor make_f32(std::string name, std::vector<std::uint32_t> shape, const std::vector<float>& values) {
    ts::Tensor t;
    t.name = std::move(name);
    t.dtype = ts::DType::F32;
    t.shape = std::move(shape);
    t.data.resize(values.size() * 4);
    std::memcpy(t.data.data(), values.data(), t.data.size());
    return t;
}

}  // namespace

TEST_CASE("empty store is a 12-byte file") {
    const Bytes bytes = ts::write(ts::TensorStore{});
    REQUIRE(bytes.size() == 12);
    CHECK(std::memcmp(bytes.data(), "TSG1", 4) == 0);
    CHECK(ts::read(bytes).tensors.empty());
}

TEST_CASE("single f32 tensor encodes IEEE 754 little-endian") {
    ts::TensorStore store;
    store.add(make_f32("w", {2}, {1.0f, -1.0f}));
    const Bytes bytes = ts::write(store);
    // header 12 + name_len 2 + 'w' + dtype + rank + one dim = 21 bytes before data
    REQUIRE(bytes.size() == 21 + 8);
    const std::uint8_t expect[8] = {0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x80, 0xBF};
    CHECK(std::memcmp(bytes.data() + 21, expect, 8) == 0);
}

TEST_CASE("random stores round-trip byte-identically") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        ts::TensorStore store;
        const int n_tensors = int(rng() % 4);
        for (int i = 0; i < n_tensors; ++i) {
            ts::Tensor t;
            t.name = "t" + std::to_string(i) + std::string(rng() % 8, 'x');
            t.dtype = (rng() & 1) ? ts::DType::F16 : ts::DType::F32;
            const int rank = int(rng() % 3);
            std::size_t count = 1;
            for (int d = 0; d < rank; ++d) {
                t.shape.push_back(1 + rng() % 5);
                count *= t.shape.back();
            }
            t.data.resize(count * ts::dtype_size(t.dtype));
            for (auto& b : t.data) b = static_cast<std::uint8_t>(rng());
            store.add(std::move(t));
        }
        const Bytes bytes = ts::write(store);
        CHECK(ts::write(ts::read(bytes)) == bytes);
    }
}

TEST_CASE("read rejects malformed input") {
    ts::TensorStore store;
    store.add(make_f32("w", {3}, {1, 2, 3}));
    const Bytes good = ts::write(store);

    Bytes bad = good;
    bad[0] = 'X';
    CHECK_THROWS_AS(ts::read(bad), FormatError);

    bad = good;
    bad.resize(bad.size() - 5);  // truncated data
    CHECK_THROWS_AS(ts::read(bad), FormatError);

    bad = good;
    bad.push_back(0);  // trailing bytes
    CHECK_THROWS_AS(ts::read(bad), FormatError);

    bad = good;
    bad[15] = 9;  // dtype byte of tensor 0 (12 + 2 + 1 name byte)
    CHECK_THROWS_AS(ts::read(bad), FormatError);

    CHECK_THROWS_AS(ts::read(Bytes{'T', 'S'}), FormatError);

    // Duplicate names are refused at build and at parse time.
    ts::TensorStore dup;
    dup.add(make_f32("a", {1}, {0}));
    CHECK_THROWS_AS(dup.add(make_f32("a", {1}, {0})), FormatError);
}

TEST_CASE("fuzzed header mutations never crash") {
    ts::TensorStore store;
    store.add(make_f32("weights", {2, 3}, {1, 2, 3, 4, 5, 6}));
    const Bytes good = ts::write(store);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        Bytes mutated = good;
        const int flips = 1 + int(rng() % 4);
        for (int f = 0; f < flips; ++f) mutated[rng() % mutated.size()] ^= std::uint8_t(1 + rng() % 255);
        try {
            const auto parsed = ts::read(mutated);
            (void)ts::write(parsed);
        } catch (const FormatError&) {
        }
    }
}

TEST_CASE("gather widens and preserves order") {
    ts::TensorStore store;
    store.add(make_f32("a", {3}, {1.5f, -2.0f, 0.25f}));
    ts::Tensor h;
    h.name = "b";
    h.dtype = ts::DType::F16;
    h.shape = {2};
    h.data = {0x00, 0x3C, 0x00, 0xC0};  // 1.0, -2.0
    store.add(std::move(h));

    const auto view = ts::gather(store);
    REQUIRE(view.values.size() == 5);
    CHECK(view.values[0] == 1.5);
    CHECK(view.values[3] == 1.0);  // f16 0x3C00 widens exactly
    CHECK(view.values[4] == -2.0);

    const auto only_b = ts::gather(store, "b");
    CHECK(only_b.values.size() == 2);
    CHECK_THROWS_AS(ts::gather(store, "nope*"), EmptySelection);
}

TEST_CASE("glob matching") {
    CHECK(ts::glob_match("layer.*", "layer.0.weight"));
    CHECK_FALSE(ts::glob_match("layer.*", "head.weight"));
    CHECK(ts::glob_match("*.weight", "layer.0.weight"));
    CHECK(ts::glob_match("w?", "w1"));
    CHECK_FALSE(ts::glob_match("w?", "w12"));
    CHECK(ts::glob_match("*", "anything"));
}

TEST_CASE("scatter with an unchanged view is byte-identical") {
    std::mt19937_64 rng(5);
    ts::TensorStore store;
    ts::Tensor t;
    t.name = "w";
    t.dtype = ts::DType::F16;
    t.shape = {64};
    t.data.resize(128);
    for (auto& b : t.data) b = static_cast<std::uint8_t>(rng());
    store.add(std::move(t));
    store.add(make_f32("v", {16}, std::vector<float>(16, 3.14f)));

    const auto view = ts::gather(store);
    const auto back = ts::scatter(store, view);
    CHECK(ts::write(back) == ts::write(store));
}

TEST_CASE("f16 store-back rounds to nearest even") {
    CHECK(f64_to_f16(1.0000001) == 0x3C00);
    CHECK(f64_to_f16(65520.0) == 0x7C00);   // rounding boundary goes to infinity
    CHECK(f64_to_f16(65519.0) == 0x7BFF);   // max finite 65504
    CHECK(f16_to_f64(0x7BFF) == 65504.0);
    CHECK(f64_to_f16(-65520.0) == 0xFC00);
    CHECK(f64_to_f16(0.0) == 0x0000);
    CHECK(std::signbit(f16_to_f64(f64_to_f16(-0.0))));
    // Subnormal boundary: 2^-25 ties to zero, anything above rounds up.
    CHECK(f64_to_f16(std::ldexp(1.0, -25)) == 0x0000);
    CHECK(f64_to_f16(std::nextafter(std::ldexp(1.0, -25), 1.0)) == 0x0001);
    CHECK(f16_to_f64(0x0001) == std::ldexp(1.0, -24));
}

TEST_CASE("all finite f16 values survive a widen/narrow round trip") {
    for (std::uint32_t h = 0; h < 0x10000; ++h) {
        const std::uint16_t u = static_cast<std::uint16_t>(h);
        const double d = f16_to_f64(u);
        if (std::isnan(d)) continue;
        CHECK(f64_to_f16(d) == u);
    }
}

TEST_CASE("raw f32 stream round-trips") {
    const std::vector<float> values = {0.5f, -1.25f, 3e-5f};
    Bytes raw(values.size() * 4);
    std::memcpy(raw.data(), values.data(), raw.size());
    const auto store = ts::read_raw_f32(raw);
    REQUIRE(store.tensors.size() == 1);
    CHECK(store.tensors[0].name == "w");
    CHECK(ts::write_raw_f32(store) == raw);
    CHECK_THROWS_AS(ts::read_raw_f32(Bytes(7, 0)), FormatError);
}
