/*
 * Copyright 2026 The OSPK Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "ospk/errors.hpp"
#include "ospk/frame.hpp"
#include "ospk/network.hpp"
#include "ospk/weight_file.hpp"

using namespace ospk;

namespace {

std::vector<uint8_t> header(uint16_t version, std::vector<std::pair<uint32_t, uint32_t>> dims)
{
    std::vector<uint8_t> out{'O', 'S', 'P', 'K'};
    auto put = [&](uint64_t v, int n) {
        for (int i = 0; i < n; ++i) {
            out.push_back(static_cast<uint8_t>(v >> (8 * i)));
        }
    };
    put(version, 2);
    put(dims.size(), 2);
    for (auto [in, o] : dims) {
        put(in, 4);
        put(o, 4);
    }
    return out;
}

ParseErrorKind parse_kind(const std::vector<uint8_t> &bytes)
{
    try {
        load_weight_file(bytes);
    } catch (const ParseError &e) {
        return e.kind();
    }
    FAIL("no parse error");
    return ParseErrorKind::BadImage;
}

} // namespace

TEST_CASE("spike vector bit order")
{
    SpikeVector v(10);
    CHECK(v.bytes().size() == 2);
    v.set(0, true);
    v.set(9, true);
    CHECK(v.bytes()[0] == 0x01);
    CHECK(v.bytes()[1] == 0x02);
    CHECK(v.popcount() == 2);
    v.set(0, false);
    CHECK_FALSE(v.test(0));
    v.clear();
    CHECK(v.popcount() == 0);
    CHECK(SpikeVector(1024).bytes().size() == 128);
}

TEST_CASE("canonical network dimensions")
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    CHECK(cfg.layers == std::vector<LayerDims>{{1, 1024}, {1024, 1024}, {1024, 10}});
    // 1024 + 1024*1024 + 1024*10
    CHECK(cfg.total_synapses() == 1059840);
    CHECK(cfg.total_neurons() == 2058);
    CHECK(cfg.widest_layer() == 1024);
    CHECK(cfg.input_width() == 1024);
    CHECK(cfg.output_width() == 10);
    CHECK_NOTHROW(cfg.validate_for_hardware());
    CHECK(WeightStore(cfg.layers).total_synapses() == 1059840);
}

TEST_CASE("network config validation")
{
    const std::vector<uint32_t> wide{1025, 10};
    CHECK_THROWS_AS(NetworkConfig::dense(wide).validate_for_hardware(), ConfigError);
    const std::vector<uint32_t> single{16};
    CHECK_THROWS_AS(NetworkConfig::dense(single).validate_for_hardware(), ConfigError);
    NetworkConfig broken = NetworkConfig::canonical();
    broken.layers[2].fan_in = 7;
    CHECK_THROWS_AS(broken.validate(), ConfigError);
    NetworkConfig few = NetworkConfig::canonical();
    few.params.pop_back();
    CHECK_THROWS_AS(few.validate(), ConfigError);
    NetworkConfig zero = NetworkConfig::canonical();
    zero.layers[0].fan_out = 0;
    zero.layers[1].fan_in = 0;
    CHECK_THROWS_AS(zero.validate(), ConfigError);
}

TEST_CASE("weight store layout and determinism")
{
    const std::vector<LayerDims> dims{{1, 3}, {3, 2}};
    WeightStore w(dims);
    CHECK(w.total_synapses() == 9);
    CHECK(w.weight(1, 1, 2) == -1);
    w.set_bit(1, 1, 2, true);
    CHECK(w.weight(1, 1, 2) == 1);
    CHECK(w.bit(1, 1, 2));
    CHECK_FALSE(w.bit(1, 0, 2));

    const auto a = WeightStore::random(NetworkConfig::canonical().layers, 42);
    const auto b = WeightStore::random(NetworkConfig::canonical().layers, 42);
    const auto c = WeightStore::random(NetworkConfig::canonical().layers, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    std::size_t ones = 0;
    for (std::size_t j = 0; j < 1024; ++j) {
        for (std::size_t i = 0; i < 1024; ++i) {
            ones += a.bit(1, j, i);
        }
    }
    // fair coin over 2^20 draws
    CHECK(ones > 520000);
    CHECK(ones < 528576);
}

TEST_CASE("weight file minimal and round trip")
{
    auto f = header(1, {{1, 1}});
    f.push_back(0x01);
    const WeightStore w = load_weight_file(f);
    CHECK(w.dims() == std::vector<LayerDims>{{1, 1}});
    CHECK(w.weight(0, 0, 0) == 1);
    CHECK(serialize_weight_file(w) == f);

    const auto dims = std::vector<LayerDims>{{1, 5}, {5, 3}, {3, 2}};
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const WeightStore r = WeightStore::random(dims, seed);
        const auto bytes = serialize_weight_file(r);
        // 5 bits -> 1 byte, 15 -> 2, 6 -> 1
        CHECK(bytes.size() == 8 + 3 * 8 + 4);
        CHECK(load_weight_file(bytes) == r);
        CHECK(serialize_weight_file(load_weight_file(bytes)) == bytes);
    }
    // row-major, LSB first: layer 1 row 0 is bits 0..4, row 1 starts at bit 5
    WeightStore one(std::vector<LayerDims>{{1, 1}, {1, 1}, {3, 4}});
    one.set_bit(2, 1, 0, true);
    const auto b = serialize_weight_file(one);
    CHECK(b[b.size() - 2] == 0x08);
}

TEST_CASE("weight file error kinds")
{
    auto good = header(1, {{2, 2}});
    good.push_back(0x0F);
    CHECK_NOTHROW(load_weight_file(good));

    auto bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(parse_kind(bad_magic) == ParseErrorKind::BadMagic);

    auto version = header(2, {{2, 2}});
    version.push_back(0);
    CHECK(parse_kind(version) == ParseErrorKind::UnsupportedVersion);

    CHECK(parse_kind({'O', 'S'}) == ParseErrorKind::TruncatedHeader);
    auto short_table = header(1, {{2, 2}});
    short_table.resize(short_table.size() - 3);
    CHECK(parse_kind(short_table) == ParseErrorKind::TruncatedHeader);

    CHECK(parse_kind(header(1, {{2, 2}})) == ParseErrorKind::TruncatedPayload);
    CHECK(parse_kind(header(1, {{1, 1024}, {1024, 1024}})) == ParseErrorKind::TruncatedPayload);

    CHECK(parse_kind(header(1, {{65536, 65536}, {1, 1}})) == ParseErrorKind::DimensionOverflow);

    auto trailing = good;
    trailing.push_back(0);
    CHECK(parse_kind(trailing) == ParseErrorKind::TrailingBytes);

    // random truncations never crash
    const auto full = serialize_weight_file(WeightStore::random({{1, 7}, {7, 9}}, 1));
    for (std::size_t n = 0; n < full.size(); ++n) {
        std::vector<uint8_t> cut(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
        CHECK_THROWS_AS(load_weight_file(cut), ParseError);
    }
}

TEST_CASE("file helpers report the path")
{
    const auto missing = std::filesystem::temp_directory_path() / "ospk-does-not-exist" / "w.bin";
    try {
        read_file(missing);
        FAIL("expected IoError");
    } catch (const IoError &e) {
        CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
    }
    const auto tmp = std::filesystem::temp_directory_path() / "ospk-test-roundtrip.bin";
    const std::vector<uint8_t> data{1, 2, 3};
    write_file(tmp, data);
    CHECK(read_file(tmp) == data);
    std::filesystem::remove(tmp);
}

TEST_CASE("image decoding")
{
    const auto img = random_image(3);
    CHECK(img.size() == 1024);
    CHECK(random_image(3) == img);
    CHECK(decode_image(img) == img);
    CHECK(decode_image(encode_pgm(img)) == img);

    std::string pgm = "P5\n# comment\n32 32\n15\n";
    std::vector<uint8_t> bytes(pgm.begin(), pgm.end());
    bytes.resize(bytes.size() + 1024, 15);
    bytes[pgm.size()] = 0;
    const auto scaled = decode_image(bytes);
    CHECK(scaled[0] == 0);
    CHECK(scaled[1] == 255);

    auto bad = [](const std::string &s) {
        std::vector<uint8_t> b(s.begin(), s.end());
        try {
            decode_image(b);
        } catch (const ParseError &e) {
            return e.kind() == ParseErrorKind::BadImage;
        }
        return false;
    };
    CHECK(bad("P5\n16 16\n255\n"));
    CHECK(bad("P5\n32 32\n65535\n"));
    CHECK(bad("P5\n32 32\n255\nabc"));
    CHECK(bad("P5\nxx"));
    CHECK(bad(std::string(1000, 'a')));
    CHECK_THROWS_AS(encode_pgm(std::vector<uint8_t>(10)), ConfigError);
}

TEST_CASE("frame binarization")
{
    std::vector<uint8_t> px(1024, 0);
    px[0] = 128;
    px[1] = 127;
    px[1023] = 255;
    const SpikeVector f = encode_frame(px);
    CHECK(f.size() == 1024);
    CHECK(f.test(0));
    CHECK_FALSE(f.test(1));
    CHECK(f.test(1023));
    CHECK(f.popcount() == 2);
    CHECK(encode_frame(px, 1).popcount() == 3);
}
