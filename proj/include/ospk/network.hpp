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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ospk/neuron.hpp"

namespace ospk {

/// Number of physical neurons on the core; every layer is mapped onto them.
inline constexpr std::size_t kHardwareNeurons = 1024;

/// Bit-packed spike vector; bit i lives in byte i / 8 at position i % 8.
class SpikeVector {
public:
    SpikeVector() = default;
    explicit SpikeVector(std::size_t width) : width_(width), bytes_((width + 7) / 8, 0) {}

    std::size_t size() const { return width_; }
    bool test(std::size_t i) const { return (bytes_[i / 8] >> (i % 8)) & 1U; }
    void set(std::size_t i, bool value);
    void clear();
    std::size_t popcount() const;

    std::span<const uint8_t> bytes() const { return bytes_; }
    std::span<uint8_t> bytes() { return bytes_; }

    bool operator==(const SpikeVector &) const = default;

private:
    std::size_t width_ = 0;
    std::vector<uint8_t> bytes_;
};

struct LayerDims {
    uint32_t fan_in = 0;
    uint32_t fan_out = 0;

    std::size_t synapses() const { return std::size_t{fan_in} * fan_out; }
    bool operator==(const LayerDims &) const = default;
};

/// Builds layer dims from neuron counts: an input layer with one synapse per
/// neuron, followed by dense layers. {1024, 1024, 10} is the canonical network.
std::vector<LayerDims> dense_dims(std::span<const uint32_t> widths);

/// Bipolar weights, one bit per synapse (1 -> +1, 0 -> -1). Layers are stored
/// back to back; within a layer, row-major by post-synaptic neuron.
class WeightStore {
public:
    WeightStore() = default;
    /// All weights start at -1.
    explicit WeightStore(std::vector<LayerDims> dims);

    /// Seeded uniform random weights; identical seeds give identical bits.
    static WeightStore random(std::vector<LayerDims> dims, uint64_t seed);

    const std::vector<LayerDims> &dims() const { return dims_; }
    std::size_t layer_count() const { return dims_.size(); }
    std::size_t total_synapses() const { return total_bits_; }

    bool bit(std::size_t layer, std::size_t post, std::size_t pre) const;
    int weight(std::size_t layer, std::size_t post, std::size_t pre) const
    {
        return bit(layer, post, pre) ? 1 : -1;
    }
    void set_bit(std::size_t layer, std::size_t post, std::size_t pre, bool value);
    void fill(bool value);

    bool operator==(const WeightStore &) const = default;

private:
    std::size_t index(std::size_t layer, std::size_t post, std::size_t pre) const;

    std::vector<LayerDims> dims_;
    std::vector<std::size_t> layer_offset_;
    std::size_t total_bits_ = 0;
    std::vector<uint64_t> words_;
};

/// Network shape plus one NeuronParams per layer.
struct NetworkConfig {
    std::vector<LayerDims> layers;
    std::vector<NeuronParams> params;

    /// 1024-1024-10 with a one-synapse input layer.
    static NetworkConfig canonical(const NeuronParams &params = {});
    static NetworkConfig dense(std::span<const uint32_t> widths, const NeuronParams &params = {});

    std::size_t input_width() const { return layers.front().fan_out; }
    std::size_t output_width() const { return layers.back().fan_out; }
    std::size_t total_synapses() const;
    std::size_t total_neurons() const;
    std::size_t widest_layer() const;

    /// Throws ConfigError on an empty network, zero-sized layers, mismatched
    /// chaining, a multi-synapse first layer or a params/layers size mismatch.
    void validate() const;
    /// validate() plus the hardware limits of the core (fan_out <= 1,024).
    void validate_for_hardware() const;

    bool operator==(const NetworkConfig &) const = default;
};

} // namespace ospk
