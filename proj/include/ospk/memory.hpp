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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ospk/network.hpp"

namespace ospk {

/// One dual-port SRAM macro. Each access takes two SRAM cycles and the SRAMs
/// run at twice the core clock, so one access per port completes per core cycle.
struct SramMacro {
    static constexpr std::size_t kCapacityBytes = 2048;
    static constexpr int kPorts = 2;
    static constexpr std::size_t kWordBytes = 8; // 64-bit port width
    static constexpr int kAccessSramCycles = 2;
    static constexpr int kClockRatio = 2;

    static constexpr int core_latency_cycles() { return kAccessSramCycles / kClockRatio; }
};

/// Bytes of the pre-loaded input frame bank.
inline constexpr std::size_t kInputBankBytes = 16 * 1024;
/// Slots for whole-layer spike vectors in the spike region.
inline constexpr std::size_t kSpikeVectorSlots = 16;
/// Connections consumed per MAC unit per cycle.
inline constexpr std::size_t kMacLanes = 4;

enum class Region : uint8_t {
    Weights,
    Potentials,
    Decay,
    Thresholds,
    Spikes,
    Inputs,
};
inline constexpr std::size_t kRegionCount = 6;

const char *to_string(Region r);

struct RegionExtent {
    Region id = Region::Weights;
    std::size_t base = 0;        // byte address, macro-aligned
    std::size_t size = 0;        // bytes of content
    std::size_t first_macro = 0;
    std::size_t macro_count = 0;
    bool interleaved = false;    // 64-bit words round-robin across the region's macros

    std::size_t capacity() const { return macro_count * SramMacro::kCapacityBytes; }
};

/// A contiguous run of weight bits consumed by all MAC units in one cycle.
struct FetchBlock {
    std::size_t bit_offset = 0;
    std::size_t bits = 0;
    std::size_t lanes = 0; // connections per MAC unit in this block

    std::size_t first_word() const { return bit_offset / 64; }
    std::size_t word_count() const { return bits == 0 ? 0 : (bit_offset + bits - 1) / 64 - first_word() + 1; }

    bool operator==(const FetchBlock &) const = default;
};

/// Weights in the order the MAC units consume them. Layer l's block c holds,
/// for each post-neuron j, the weights of inputs 4c .. 4c+lanes-1
/// (bit j * lanes + k of the block).
class WeightLayout {
public:
    WeightLayout() = default;
    explicit WeightLayout(const std::vector<LayerDims> &dims);

    std::span<const FetchBlock> blocks(std::size_t layer) const { return blocks_[layer]; }
    std::size_t total_bits() const { return total_bits_; }
    std::size_t total_bytes() const { return (total_bits_ + 7) / 8; }
    std::size_t peak_words_per_cycle() const;
    std::size_t stream_bit(std::size_t layer, std::size_t post, std::size_t pre) const;

    bool operator==(const WeightLayout &) const = default;

private:
    std::vector<LayerDims> dims_;
    std::vector<std::vector<FetchBlock>> blocks_;
    std::size_t total_bits_ = 0;
};

class MemoryMap {
public:
    const RegionExtent &region(Region r) const { return regions_[static_cast<std::size_t>(r)]; }
    std::span<const RegionExtent> regions() const { return regions_; }
    std::size_t macro_count() const { return macro_count_; }
    std::size_t hardware_neurons() const { return hw_neurons_; }
    /// Sum of region content sizes.
    std::size_t content_bytes() const;
    /// Total SRAM provisioned (macro_count * 2 kB).
    std::size_t mapped_bytes() const { return macro_count_ * SramMacro::kCapacityBytes; }
    /// Global macro index holding byte `offset` of region `r`.
    std::size_t macro_of(Region r, std::size_t offset) const;

    friend MemoryMap build_memory_map(const NetworkConfig &config);

private:
    std::array<RegionExtent, kRegionCount> regions_{};
    std::size_t macro_count_ = 0;
    std::size_t hw_neurons_ = 0;
};

/// Region order and sizes: weights (fetch-order, striped), potentials (Q7.8 per
/// hardware neuron), decay codes (1 B per hardware neuron), thresholds (active
/// Schmitt threshold, Q7.8 per hardware neuron), spikes (16 vector slots) and
/// the 16 kB input bank. Each region starts on a fresh macro.
MemoryMap build_memory_map(const NetworkConfig &config);

enum class Port : uint8_t { A, B, Any };

struct AccessTicket {
    Region region = Region::Weights;
    std::size_t offset = 0; // byte offset of the 64-bit word
    std::size_t macro = 0;
    int port = 0;
    bool write = false;
    uint64_t issue_cycle = 0;
    uint64_t ready_cycle = 0;
};

struct RegionCounters {
    uint64_t word_reads = 0;
    uint64_t word_writes = 0;
    uint64_t bytes_read = 0;    // includes untracked state traffic
    uint64_t bytes_written = 0;

    bool operator==(const RegionCounters &) const = default;
};

/// SRAM contents plus per-cycle port bookkeeping. Single-threaded: owned next
/// to the CoreState that drives it.
class MemorySystem {
public:
    explicit MemorySystem(MemoryMap map);

    const MemoryMap &map() const { return map_; }

    /// Starts a new core cycle; frees every port.
    void begin_cycle(uint64_t cycle);
    uint64_t cycle() const { return cycle_; }

    /// One 64-bit word access at byte `offset` of `region`. Throws
    /// SimulationFault on an out-of-range offset or when the macro has no
    /// free port this cycle.
    AccessTicket access(Region region, std::size_t offset, Port port = Port::Any, bool write = false);
    /// Reads every word overlapping [byte_offset, byte_offset + bytes).
    std::vector<AccessTicket> read_span(Region region, std::size_t byte_offset, std::size_t bytes);

    /// Counts traffic that bypasses port arbitration (selector state path).
    void record(Region region, std::size_t bytes, bool write);

    std::span<uint8_t> contents(Region r) { return data_[static_cast<std::size_t>(r)]; }
    std::span<const uint8_t> contents(Region r) const { return data_[static_cast<std::size_t>(r)]; }

    const RegionCounters &counters(Region r) const { return counters_[static_cast<std::size_t>(r)]; }
    int ports_in_use(std::size_t macro) const { return port_busy_[macro][0] + port_busy_[macro][1]; }

private:
    MemoryMap map_;
    std::array<std::vector<uint8_t>, kRegionCount> data_;
    std::array<RegionCounters, kRegionCount> counters_{};
    std::vector<std::array<uint8_t, 2>> port_busy_;
    std::vector<std::size_t> touched_;
    uint64_t cycle_ = 0;
};

/// Writes the weights into the weight region in fetch order.
void program_weights(MemorySystem &mem, const WeightLayout &layout, const WeightStore &weights);
/// Writes a binary frame into input-bank slot `slot` (ceil(width/8) bytes per slot).
void program_frame(MemorySystem &mem, std::size_t slot, const SpikeVector &frame);

} // namespace ospk
