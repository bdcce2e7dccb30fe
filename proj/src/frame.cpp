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

#include "ospk/frame.hpp"

#include <algorithm>
#include <string_view>
#include <cctype>
#include <random>
#include <string>

#include "ospk/errors.hpp"

namespace ospk {

namespace {

class PgmHeader {
public:
    explicit PgmHeader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    unsigned next_number()
    {
        skip_space();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw ParseError(ParseErrorKind::BadImage, "malformed PGM header");
        }
        unsigned v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + static_cast<unsigned>(bytes_[pos_] - '0');
            if (v > 65535) {
                throw ParseError(ParseErrorKind::BadImage, "PGM header value too large");
            }
            ++pos_;
        }
        return v;
    }
    std::size_t pos() const { return pos_; }
    void skip(std::size_t n) { pos_ += n; }

private:
    void skip_space()
    {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<uint8_t> decode_image(std::span<const uint8_t> bytes)
{
    const bool is_pgm = bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5';
    if (!is_pgm) {
        if (bytes.size() != kFramePixels) {
            throw ParseError(ParseErrorKind::BadImage,
                             "raw frame must be " + std::to_string(kFramePixels) + " bytes, got " +
                                 std::to_string(bytes.size()));
        }
        return {bytes.begin(), bytes.end()};
    }

    PgmHeader hdr(bytes);
    hdr.skip(2);
    const unsigned width = hdr.next_number();
    const unsigned height = hdr.next_number();
    const unsigned maxval = hdr.next_number();
    if (width != kFrameSide || height != kFrameSide) {
        throw ParseError(ParseErrorKind::BadImage, "PGM must be 32x32, got " +
                                                       std::to_string(width) + "x" +
                                                       std::to_string(height));
    }
    if (maxval == 0 || maxval > 255) {
        throw ParseError(ParseErrorKind::BadImage, "only 8-bit PGM is supported");
    }
    // Exactly one whitespace byte separates the header from the raster.
    const std::size_t start = hdr.pos() + 1;
    if (bytes.size() < start + kFramePixels) {
        throw ParseError(ParseErrorKind::BadImage, "PGM raster truncated");
    }
    std::vector<uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                bytes.begin() + static_cast<std::ptrdiff_t>(start + kFramePixels));
    if (maxval != 255) {
        for (auto &p : pixels) {
            p = static_cast<uint8_t>(std::min(255U, (p * 255U + maxval / 2) / maxval));
        }
    }
    return pixels;
}

std::vector<uint8_t> encode_pgm(std::span<const uint8_t> pixels)
{
    if (pixels.size() != kFramePixels) {
        throw ConfigError("image must have " + std::to_string(kFramePixels) + " pixels");
    }
    static constexpr std::string_view header = "P5\n32 32\n255\n";
    std::vector<uint8_t> out(header.size() + pixels.size());
    std::copy(header.begin(), header.end(), out.begin());
    std::copy(pixels.begin(), pixels.end(), out.begin() + static_cast<std::ptrdiff_t>(header.size()));
    return out;
}

SpikeVector encode_frame(std::span<const uint8_t> pixels, uint8_t threshold)
{
    SpikeVector frame(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        frame.set(i, pixels[i] >= threshold);
    }
    return frame;
}

std::vector<uint8_t> random_image(uint64_t seed, std::size_t pixels)
{
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> out(pixels);
    uint64_t word = 0;
    for (std::size_t i = 0; i < pixels; ++i) {
        if (i % 8 == 0) {
            word = rng();
        }
        out[i] = static_cast<uint8_t>(word >> (8 * (i % 8)));
    }
    return out;
}

} // namespace ospk
