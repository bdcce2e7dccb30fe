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

#include "ospk/network.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "ospk/errors.hpp"

namespace ospk {

void SpikeVector::set(std::size_t i, bool value)
{
    const auto mask = static_cast<uint8_t>(1U << (i % 8));
    if (value) {
        bytes_[i / 8] |= mask;
    } else {
        bytes_[i / 8] &= static_cast<uint8_t>(~mask);
    }
}

void SpikeVector::clear() { std::fill(bytes_.begin(), bytes_.end(), 0); }

std::size_t SpikeVector::popcount() const
{
    std::size_t n = 0;
    for (uint8_t b : bytes_) {
        n += static_cast<std::size_t>(std::popcount(b));
    }
    return n;
}

std::vector<LayerDims> dense_dims(std::span<const uint32_t> widths)
{
    std::vector<LayerDims> dims;
    uint32_t fan_in = 1;
    for (uint32_t w : widths) {
        dims.push_back({fan_in, w});
        fan_in = w;
    }
    return dims;
}

WeightStore::WeightStore(std::vector<LayerDims> dims) : dims_(std::move(dims))
{
    layer_offset_.reserve(dims_.size());
    for (const auto &d : dims_) {
        layer_offset_.push_back(total_bits_);
        total_bits_ += d.synapses();
    }
    words_.assign((total_bits_ + 63) / 64, 0);
}

WeightStore WeightStore::random(std::vector<LayerDims> dims, uint64_t seed)
{
    WeightStore store(std::move(dims));
    std::mt19937_64 rng(seed);
    for (auto &w : store.words_) {
        w = rng();
    }
    if (const std::size_t tail = store.total_bits_ % 64; tail != 0 && !store.words_.empty()) {
        store.words_.back() &= (uint64_t{1} << tail) - 1;
    }
    return store;
}

std::size_t WeightStore::index(std::size_t layer, std::size_t post, std::size_t pre) const
{
    return layer_offset_[layer] + post * dims_[layer].fan_in + pre;
}

bool WeightStore::bit(std::size_t layer, std::size_t post, std::size_t pre) const
{
    const std::size_t i = index(layer, post, pre);
    return (words_[i / 64] >> (i % 64)) & 1U;
}

void WeightStore::set_bit(std::size_t layer, std::size_t post, std::size_t pre, bool value)
{
    const std::size_t i = index(layer, post, pre);
    const uint64_t mask = uint64_t{1} << (i % 64);
    if (value) {
        words_[i / 64] |= mask;
    } else {
        words_[i / 64] &= ~mask;
    }
}

void WeightStore::fill(bool value)
{
    std::fill(words_.begin(), words_.end(), value ? ~uint64_t{0} : uint64_t{0});
    if (const std::size_t tail = total_bits_ % 64; value && tail != 0) {
        words_.back() &= (uint64_t{1} << tail) - 1;
    }
}

NetworkConfig NetworkConfig::canonical(const NeuronParams &params)
{
    static constexpr uint32_t kWidths[] = {1024, 1024, 10};
    return dense(kWidths, params);
}

NetworkConfig NetworkConfig::dense(std::span<const uint32_t> widths, const NeuronParams &params)
{
    NetworkConfig cfg;
    cfg.layers = dense_dims(widths);
    cfg.params.assign(cfg.layers.size(), params);
    return cfg;
}

std::size_t NetworkConfig::total_synapses() const
{
    std::size_t n = 0;
    for (const auto &l : layers) {
        n += l.synapses();
    }
    return n;
}

std::size_t NetworkConfig::total_neurons() const
{
    std::size_t n = 0;
    for (const auto &l : layers) {
        n += l.fan_out;
    }
    return n;
}

std::size_t NetworkConfig::widest_layer() const
{
    std::size_t w = 0;
    for (const auto &l : layers) {
        w = std::max<std::size_t>(w, l.fan_out);
    }
    return w;
}

void NetworkConfig::validate() const
{
    if (layers.empty()) {
        throw ConfigError("network has no layers");
    }
    if (params.size() != layers.size()) {
        throw ConfigError("expected one NeuronParams per layer (" + std::to_string(layers.size()) +
                          "), got " + std::to_string(params.size()));
    }
    if (layers.front().fan_in != 1) {
        throw ConfigError("input layer neurons must have exactly one synapse");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto &l = layers[i];
        if (l.fan_in == 0 || l.fan_out == 0) {
            throw ConfigError("layer " + std::to_string(i) + " has a zero dimension");
        }
        if (i > 0 && l.fan_in != layers[i - 1].fan_out) {
            throw ConfigError("layer " + std::to_string(i) + " fan_in " + std::to_string(l.fan_in) +
                              " does not match previous fan_out " +
                              std::to_string(layers[i - 1].fan_out));
        }
        params[i].validate();
    }
}

void NetworkConfig::validate_for_hardware() const
{
    validate();
    if (layers.size() < 2) {
        throw ConfigError("the core needs an input layer and at least one dense layer");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].fan_out > kHardwareNeurons) {
            throw ConfigError("layer " + std::to_string(i) + " fan_out " +
                              std::to_string(layers[i].fan_out) + " exceeds the " +
                              std::to_string(kHardwareNeurons) + " hardware neurons");
        }
    }
}

} // namespace ospk
