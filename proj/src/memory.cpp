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

#include "ospk/memory.hpp"

#include <algorithm>
#include <string>

#include "ospk/errors.hpp"

namespace ospk {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

} // namespace

const char *to_string(FaultKind kind)
{
    switch (kind) {
    case FaultKind::PortContention:
        return "port_contention";
    case FaultKind::AddressOutOfRange:
        return "address_out_of_range";
    case FaultKind::Livelock:
        return "livelock";
    }
    return "unknown";
}

const char *to_string(Region r)
{
    switch (r) {
    case Region::Weights:
        return "weights";
    case Region::Potentials:
        return "potentials";
    case Region::Decay:
        return "decay";
    case Region::Thresholds:
        return "thresholds";
    case Region::Spikes:
        return "spikes";
    case Region::Inputs:
        return "inputs";
    }
    return "?";
}

WeightLayout::WeightLayout(const std::vector<LayerDims> &dims) : dims_(dims)
{
    for (const auto &d : dims_) {
        std::vector<FetchBlock> layer;
        for (std::size_t first = 0; first < d.fan_in; first += kMacLanes) {
            FetchBlock b;
            b.lanes = std::min<std::size_t>(kMacLanes, d.fan_in - first);
            b.bit_offset = total_bits_;
            b.bits = b.lanes * d.fan_out;
            total_bits_ += b.bits;
            layer.push_back(b);
        }
        blocks_.push_back(std::move(layer));
    }
}

std::size_t WeightLayout::peak_words_per_cycle() const
{
    std::size_t peak = 0;
    for (const auto &layer : blocks_) {
        for (const auto &b : layer) {
            peak = std::max(peak, b.word_count());
        }
    }
    return peak;
}

std::size_t WeightLayout::stream_bit(std::size_t layer, std::size_t post, std::size_t pre) const
{
    const FetchBlock &b = blocks_[layer][pre / kMacLanes];
    return b.bit_offset + post * b.lanes + pre % kMacLanes;
}

std::size_t MemoryMap::content_bytes() const
{
    std::size_t n = 0;
    for (const auto &r : regions_) {
        n += r.size;
    }
    return n;
}

std::size_t MemoryMap::macro_of(Region r, std::size_t offset) const
{
    const RegionExtent &ext = region(r);
    if (ext.interleaved) {
        return ext.first_macro + (offset / SramMacro::kWordBytes) % ext.macro_count;
    }
    return ext.first_macro + offset / SramMacro::kCapacityBytes;
}

MemoryMap build_memory_map(const NetworkConfig &config)
{
    config.validate();
    MemoryMap map;
    map.hw_neurons_ = config.widest_layer();
    const std::size_t n = map.hw_neurons_;

    const WeightLayout layout(config.layers);
    const std::size_t weight_bytes = layout.total_bytes();
    // Enough macros that one cycle's block never needs more than two ports per macro.
    const std::size_t weight_macros =
        std::max(ceil_div(weight_bytes, SramMacro::kCapacityBytes),
                 ceil_div(layout.peak_words_per_cycle(), SramMacro::kPorts));

    struct RegionPlan {
        Region id;
        std::size_t size;
        std::size_t macros;
        bool interleaved;
    };
    const RegionPlan plans[kRegionCount] = {
        {Region::Weights, weight_bytes, weight_macros, true},
        {Region::Potentials, 2 * n, 0, false},
        {Region::Decay, n, 0, false},
        {Region::Thresholds, 2 * n, 0, false},
        {Region::Spikes, kSpikeVectorSlots * ceil_div(n, 8), 0, false},
        {Region::Inputs, kInputBankBytes, 0, false},
    };

    std::size_t next_macro = 0;
    for (std::size_t i = 0; i < kRegionCount; ++i) {
        RegionExtent &ext = map.regions_[i];
        ext.id = plans[i].id;
        ext.size = plans[i].size;
        ext.interleaved = plans[i].interleaved;
        ext.macro_count = plans[i].macros != 0
                              ? plans[i].macros
                              : std::max<std::size_t>(1, ceil_div(ext.size, SramMacro::kCapacityBytes));
        ext.first_macro = next_macro;
        ext.base = next_macro * SramMacro::kCapacityBytes;
        next_macro += ext.macro_count;
    }
    map.macro_count_ = next_macro;
    return map;
}

MemorySystem::MemorySystem(MemoryMap map) : map_(std::move(map))
{
    for (const auto &ext : map_.regions()) {
        data_[static_cast<std::size_t>(ext.id)].assign(ext.size, 0);
    }
    port_busy_.assign(map_.macro_count(), {0, 0});
}

void MemorySystem::begin_cycle(uint64_t cycle)
{
    for (std::size_t m : touched_) {
        port_busy_[m] = {0, 0};
    }
    touched_.clear();
    cycle_ = cycle;
}

AccessTicket MemorySystem::access(Region region, std::size_t offset, Port port, bool write)
{
    const RegionExtent &ext = map_.region(region);
    if (offset >= ext.size) {
        throw SimulationFault(FaultKind::AddressOutOfRange,
                              std::string(to_string(region)) + " offset " + std::to_string(offset) +
                                  " >= size " + std::to_string(ext.size));
    }
    const std::size_t word_offset = offset - offset % SramMacro::kWordBytes;
    const std::size_t macro = map_.macro_of(region, word_offset);
    auto &busy = port_busy_[macro];

    int chosen = -1;
    if (port == Port::Any) {
        chosen = !busy[0] ? 0 : (!busy[1] ? 1 : -1);
    } else {
        const int p = port == Port::A ? 0 : 1;
        chosen = busy[p] ? -1 : p;
    }
    if (chosen < 0) {
        throw SimulationFault(FaultKind::PortContention,
                              "macro " + std::to_string(macro) + " (" + to_string(region) +
                                  ") has no free port in cycle " + std::to_string(cycle_));
    }
    if (!busy[0] && !busy[1]) {
        touched_.push_back(macro);
    }
    busy[static_cast<std::size_t>(chosen)] = 1;

    auto &c = counters_[static_cast<std::size_t>(region)];
    if (write) {
        ++c.word_writes;
        c.bytes_written += SramMacro::kWordBytes;
    } else {
        ++c.word_reads;
        c.bytes_read += SramMacro::kWordBytes;
    }
    return {region,
            word_offset,
            macro,
            chosen,
            write,
            cycle_,
            cycle_ + static_cast<uint64_t>(SramMacro::core_latency_cycles())};
}

std::vector<AccessTicket> MemorySystem::read_span(Region region, std::size_t byte_offset, std::size_t bytes)
{
    std::vector<AccessTicket> tickets;
    if (bytes == 0) {
        return tickets;
    }
    const std::size_t first = byte_offset / SramMacro::kWordBytes;
    const std::size_t last = (byte_offset + bytes - 1) / SramMacro::kWordBytes;
    for (std::size_t w = first; w <= last; ++w) {
        tickets.push_back(access(region, w * SramMacro::kWordBytes));
    }
    return tickets;
}

void MemorySystem::record(Region region, std::size_t bytes, bool write)
{
    auto &c = counters_[static_cast<std::size_t>(region)];
    (write ? c.bytes_written : c.bytes_read) += bytes;
}

void program_weights(MemorySystem &mem, const WeightLayout &layout, const WeightStore &weights)
{
    auto dst = mem.contents(Region::Weights);
    if (dst.size() < layout.total_bytes()) {
        throw ConfigError("weight region too small for the weight stream");
    }
    std::fill(dst.begin(), dst.end(), 0);
    for (std::size_t l = 0; l < weights.layer_count(); ++l) {
        const LayerDims d = weights.dims()[l];
        for (std::size_t j = 0; j < d.fan_out; ++j) {
            for (std::size_t i = 0; i < d.fan_in; ++i) {
                if (weights.bit(l, j, i)) {
                    const std::size_t b = layout.stream_bit(l, j, i);
                    dst[b / 8] = static_cast<uint8_t>(dst[b / 8] | (1U << (b % 8)));
                }
            }
        }
    }
}

void program_frame(MemorySystem &mem, std::size_t slot, const SpikeVector &frame)
{
    auto dst = mem.contents(Region::Inputs);
    const auto src = frame.bytes();
    const std::size_t base = slot * src.size();
    if (base + src.size() > dst.size()) {
        throw ConfigError("input bank slot " + std::to_string(slot) + " out of range");
    }
    std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(base));
}

} // namespace ospk
