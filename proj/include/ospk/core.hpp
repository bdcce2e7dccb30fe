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

// Cycle-accurate model of the accelerator core.
//
// One timestep is three FSM states. Each dense state runs three engines side
// by side: the MAC units accumulate the current layer 4 connections per cycle,
// the neuron selector finalizes the previous layer 16 neurons per cycle
// (MAU decay, potential add, reset, Schmitt trigger), and in the output state
// the spike cache is refilled with the next input frame. A state lasts as long
// as its longest engine.
//
//   InputLayer : [save output layer] [init] [accumulate input layer]
//   HiddenLayer: MAC hidden layer    | selector finalizes input layer
//   OutputLayer: MAC output layer    | selector finalizes hidden layer | cache load
//
// Within a tick: (1) memory responses land, (2) MAU decay + reset,
// (3) potential add, (4) Schmitt evaluation and spike write, (5) MAC
// accumulate, (6) next-cycle memory requests and FSM advance.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ospk/fixed_point.hpp"
#include "ospk/memory.hpp"
#include "ospk/network.hpp"
#include "ospk/trace.hpp"

namespace ospk {

inline constexpr std::size_t kSelectorGroup = 16;
inline constexpr std::size_t kSpikeCacheBytes = kHardwareNeurons / 8;
inline constexpr std::size_t kCacheLoadBytesPerCycle = 16;
/// Cycles of the input-layer state spent on init and accumulate.
inline constexpr uint32_t kInputInitCycles = 1;
inline constexpr uint32_t kInputAccumulateCycles = 1;

struct MacUnit {
    static constexpr std::size_t kLanes = kMacLanes;
    int16_t accumulator = 0;

    bool operator==(const MacUnit &) const = default;
};

/// Holds one layer's MAC result while the MACs move on to the next layer.
struct PotentialAdder {
    QFixed held_potential;

    bool operator==(const PotentialAdder &) const = default;
};

struct NeuronSelector {
    static constexpr std::size_t kGroupSize = kSelectorGroup;
    std::size_t cursor = 0;

    bool operator==(const NeuronSelector &) const = default;
};

struct SpikeProcessor {
    /// Input frame bits read by the MACs in the input-layer state.
    std::array<uint8_t, kSpikeCacheBytes> cache{};
    /// Schmitt trigger output, one bit per hardware neuron; feeds the MAC
    /// lanes of the following layer.
    SpikeVector emitted{kHardwareNeurons};

    bool cache_bit(std::size_t i) const { return (cache[i / 8] >> (i % 8)) & 1U; }
    bool operator==(const SpikeProcessor &) const = default;
};

struct ControlFsm {
    FsmState state = FsmState::InputLayer;
    uint32_t cycle_in_state = 0;
    std::size_t phase = 0;
    uint32_t timestep = 0;

    bool operator==(const ControlFsm &) const = default;
};

/// What each engine does during one FSM state.
struct PhasePlan {
    FsmState state = FsmState::InputLayer;
    std::size_t mac_layer = 0;
    uint32_t mac_start = 0;
    uint32_t mac_cycles = 0;
    std::size_t finalize_layer = 0;
    uint32_t selector_cycles = 0;
    uint32_t cache_cycles = 0;
    uint32_t length = 0;

    bool operator==(const PhasePlan &) const = default;
};

/// Architectural neuron state of one network layer.
struct LayerStorage {
    std::vector<QFixed> potential;
    SpikeVector inhibited;
    SpikeVector spiked;

    bool operator==(const LayerStorage &) const = default;
};

struct PendingWeights {
    std::size_t layer = 0;
    std::size_t block = 0;
    uint64_t ready_cycle = 0;

    bool operator==(const PendingWeights &) const = default;
};

struct PendingCacheChunk {
    std::size_t chunk = 0;
    std::size_t frame_offset = 0;
    uint64_t ready_cycle = 0;

    bool operator==(const PendingCacheChunk &) const = default;
};

struct CoreState {
    NetworkConfig config;
    WeightLayout layout;
    std::vector<PhasePlan> plans;

    ControlFsm fsm;
    std::vector<MacUnit> macs;
    std::vector<PotentialAdder> adders;
    NeuronSelector selector;
    SpikeProcessor spikes;
    std::vector<LayerStorage> layers;

    /// Output spike counts since reset.
    std::vector<uint32_t> class_counts;
    bool output_pending = false;
    std::size_t frame_slot = 0;

    std::optional<PendingWeights> pending_weights;
    std::vector<uint8_t> weight_latch; // block bits, bit 0 = first bit of the block
    std::size_t latched_block_bits = 0;
    std::vector<PendingCacheChunk> pending_cache;

    uint64_t cycle = 0;
    CycleTrace trace;
    bool record_events = true;

    const PhasePlan &plan() const { return plans[fsm.phase]; }
    uint32_t timestep_cycles() const;

    bool operator==(const CoreState &) const = default;
};

/// Fresh core for `config`: 1,024 MAC units and potential adders, zeroed
/// state, FSM at the input-layer entry. Throws ConfigError if the network does
/// not fit the hardware.
CoreState reset(const NetworkConfig &config);

/// Advances exactly one core cycle and returns the events it produced.
/// SRAM contract violations are logged as a Fault event and rethrown as
/// SimulationFault.
std::span<const TraceEvent> tick(CoreState &core, MemorySystem &mem);

/// Runs one full Input -> Hidden -> Output pass. Must start at the input-layer
/// entry. Throws SimulationFault(Livelock) past `max_cycles`.
CycleReport run_timestep(CoreState &core, MemorySystem &mem, uint64_t max_cycles = 1u << 20);

/// Saves the output layer left pending by the last timestep.
void drain(CoreState &core, MemorySystem &mem);

/// Host-side preload of frame slot `slot` into the spike cache (untimed; the
/// core only reloads the cache itself during the output-layer state).
void preload_cache(CoreState &core, const MemorySystem &mem, std::size_t slot);

struct InferenceResult {
    std::vector<uint32_t> spike_counts;
    std::size_t prediction = 0;
    CycleTrace trace;
    std::vector<CycleReport> timesteps;
};

/// Programs `frame` into input slot 0, preloads the cache, runs `timesteps`
/// timesteps and drains. Neuron state is reset first; weights must already be
/// programmed into `mem`.
InferenceResult run_inference(CoreState &core, MemorySystem &mem, const SpikeVector &frame,
                              uint32_t timesteps);

/// Owns a memory map, a programmed memory system and a core.
class CycleSimulator {
public:
    CycleSimulator(NetworkConfig config, const WeightStore &weights);

    InferenceResult run(const SpikeVector &frame, uint32_t timesteps);

    CoreState &core() { return core_; }
    MemorySystem &memory() { return mem_; }
    const MemoryMap &map() const { return mem_.map(); }

private:
    CoreState core_;
    MemorySystem mem_;
};

} // namespace ospk
