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

#include "ospk/weight_file.hpp"

#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "ospk/errors.hpp"

namespace ospk {

namespace {

constexpr uint8_t kMagic[4] = {'O', 'S', 'P', 'K'};
// Largest synapse count we accept in one file.
constexpr uint64_t kMaxSynapses = uint64_t{1} << 32;

void put_u16(std::vector<uint8_t> &out, uint16_t v)
{
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t> &out, uint32_t v)
{
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
}

class Reader {
public:
    explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    bool has(std::size_t n) const { return bytes_.size() - pos_ >= n; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    uint16_t u16()
    {
        uint16_t v = static_cast<uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    uint32_t u32()
    {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= uint32_t{bytes_[pos_ + i]} << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    uint8_t byte() { return bytes_[pos_++]; }

private:
    std::span<const uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

const char *to_string(ParseErrorKind kind)
{
    switch (kind) {
    case ParseErrorKind::BadMagic:
        return "bad magic";
    case ParseErrorKind::UnsupportedVersion:
        return "unsupported version";
    case ParseErrorKind::TruncatedHeader:
        return "truncated header";
    case ParseErrorKind::TruncatedPayload:
        return "truncated payload";
    case ParseErrorKind::DimensionOverflow:
        return "dimension overflow";
    case ParseErrorKind::TrailingBytes:
        return "trailing bytes";
    case ParseErrorKind::BadImage:
        return "bad image";
    }
    return "?";
}

std::vector<uint8_t> serialize_weight_file(const WeightStore &weights)
{
    std::vector<uint8_t> out(std::begin(kMagic), std::end(kMagic));
    put_u16(out, kWeightFileVersion);
    put_u16(out, static_cast<uint16_t>(weights.layer_count()));
    for (const auto &d : weights.dims()) {
        put_u32(out, d.fan_in);
        put_u32(out, d.fan_out);
    }
    for (std::size_t l = 0; l < weights.layer_count(); ++l) {
        const LayerDims d = weights.dims()[l];
        uint8_t acc = 0;
        std::size_t nbits = 0;
        for (std::size_t j = 0; j < d.fan_out; ++j) {
            for (std::size_t i = 0; i < d.fan_in; ++i) {
                if (weights.bit(l, j, i)) {
                    acc = static_cast<uint8_t>(acc | (1U << (nbits % 8)));
                }
                if (++nbits % 8 == 0) {
                    out.push_back(acc);
                    acc = 0;
                }
            }
        }
        if (nbits % 8 != 0) {
            out.push_back(acc);
        }
    }
    return out;
}

WeightStore load_weight_file(std::span<const uint8_t> bytes)
{
    Reader in(bytes);
    if (!in.has(4)) {
        throw ParseError(ParseErrorKind::TruncatedHeader, "file shorter than magic");
    }
    for (uint8_t m : kMagic) {
        if (in.byte() != m) {
            throw ParseError(ParseErrorKind::BadMagic, "expected \"OSPK\"");
        }
    }
    if (!in.has(4)) {
        throw ParseError(ParseErrorKind::TruncatedHeader, "missing version/layer count");
    }
    const uint16_t version = in.u16();
    if (version != kWeightFileVersion) {
        throw ParseError(ParseErrorKind::UnsupportedVersion, "version " + std::to_string(version));
    }
    const uint16_t layer_count = in.u16();
    if (!in.has(std::size_t{layer_count} * 8)) {
        throw ParseError(ParseErrorKind::TruncatedHeader, "layer table truncated");
    }
    std::vector<LayerDims> dims(layer_count);
    uint64_t synapses = 0;
    uint64_t payload_bytes = 0;
    for (auto &d : dims) {
        d.fan_in = in.u32();
        d.fan_out = in.u32();
        const uint64_t n = uint64_t{d.fan_in} * d.fan_out;
        synapses += n;
        payload_bytes += (n + 7) / 8;
        if (synapses > kMaxSynapses) {
            throw ParseError(ParseErrorKind::DimensionOverflow,
                             "more than 2^32 synapses declared");
        }
    }
    if (in.remaining() < payload_bytes) {
        throw ParseError(ParseErrorKind::TruncatedPayload,
                         "need " + std::to_string(payload_bytes) + " payload bytes, have " +
                             std::to_string(in.remaining()));
    }
    if (in.remaining() > payload_bytes) {
        throw ParseError(ParseErrorKind::TrailingBytes,
                         std::to_string(in.remaining() - payload_bytes) + " bytes after payload");
    }

    WeightStore store(dims);
    for (std::size_t l = 0; l < dims.size(); ++l) {
        const LayerDims d = dims[l];
        uint8_t cur = 0;
        std::size_t nbits = 0;
        for (std::size_t j = 0; j < d.fan_out; ++j) {
            for (std::size_t i = 0; i < d.fan_in; ++i) {
                if (nbits % 8 == 0) {
                    cur = in.byte();
                }
                store.set_bit(l, j, i, (cur >> (nbits % 8)) & 1U);
                ++nbits;
            }
        }
    }
    return store;
}

std::vector<uint8_t> read_file(const std::filesystem::path &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) {
        throw IoError("read failed: " + path.string());
    }
    return bytes;
}

void write_file(const std::filesystem::path &path, std::span<const uint8_t> bytes)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    f.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
        throw IoError("write failed: " + path.string());
    }
}

} // namespace ospk
