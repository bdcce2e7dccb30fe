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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ospk/network.hpp"

namespace ospk {

inline constexpr std::size_t kFrameSide = 32;
inline constexpr std::size_t kFramePixels = kFrameSide * kFrameSide;
inline constexpr uint8_t kDefaultSpikeThreshold = 128;

/// Parses a 32x32 image: either a raw 1,024-byte array (row-major, one byte per
/// pixel) or an 8-bit binary PGM ("P5"). Throws ParseError(BadImage).
std::vector<uint8_t> decode_image(std::span<const uint8_t> bytes);

/// Encodes a binary PGM for a 32x32 frame.
std::vector<uint8_t> encode_pgm(std::span<const uint8_t> pixels);

/// Binarizes pixels into an input spike frame: pixel >= threshold spikes.
SpikeVector encode_frame(std::span<const uint8_t> pixels, uint8_t threshold = kDefaultSpikeThreshold);

/// Seeded uniformly random 8-bit pixels.
std::vector<uint8_t> random_image(uint64_t seed, std::size_t pixels = kFramePixels);

} // namespace ospk
