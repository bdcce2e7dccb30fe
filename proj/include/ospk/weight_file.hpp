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
#include <filesystem>
#include <span>
#include <vector>

#include "ospk/network.hpp"

namespace ospk {

// Binary weight file, all integers little-endian:
//
//   "OSPK"                      4-byte magic
//   version        u16          currently 1
//   layer_count    u16
//   layer_count x (fan_in u32, fan_out u32)
//   per layer: fan_in * fan_out weight bits, row-major by post-neuron,
//              bit i in byte i / 8 at position i % 8, zero-padded to a byte.

inline constexpr uint16_t kWeightFileVersion = 1;

std::vector<uint8_t> serialize_weight_file(const WeightStore &weights);
WeightStore load_weight_file(std::span<const uint8_t> bytes);

std::vector<uint8_t> read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const uint8_t> bytes);

} // namespace ospk
