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
#include <cstdint>
#include <string>
#include <vector>

#include "ospk/memory.hpp"

namespace ospk {

enum class FsmState : uint8_t { InputLayer, HiddenLayer, OutputLayer };
inline constexpr std::size_t kFsmStateCount = 3;

const char *to_string(FsmState s);

enum class EventKind : uint8_t {
    StateEnter,       // count = state length in cycles
    WeightFetch,      // count = weight bits requested for the next cycle
    SramRead,         // count = bytes, region set
    SramWrite,        // count = bytes, region set
    MacAccumulate,    // count = MAC units active
    AdderLatch,       // count = potential adders loaded from MAC results
    SelectorActivate, // count = potential adders swept this cycle
    SpikeEmit,        // count = spikes emitted, layer/timestep = origin
    CacheLoad,        // count = bytes landed in the spike cache
    Fault,
};

const char *to_string(EventKind k);

inline constexpr uint16_t kNoLayer = 0xFFFF;

struct TraceEvent {
    uint64_t cycle = 0;
    FsmState state = FsmState::InputLayer;
    EventKind kind = EventKind::StateEnter;
    uint16_t layer = kNoLayer;
    uint32_t timestep = 0;
    Region region = Region::Weights;
    uint32_t count = 0;

    bool operator==(const TraceEvent &) const = default;
};

/// Activity attributed to one FSM state.
struct StateCounters {
    uint64_t cycles = 0;
    uint64_t selector_activations = 0; // cycles in which the selector swept a group
    uint64_t adders_activated = 0;
    uint64_t mac_cycles = 0;
    uint64_t peak_mac_units = 0;
    uint64_t weight_bits = 0;          // bits landed for MAC use
    uint64_t cache_bytes = 0;
    uint64_t spikes = 0;

    StateCounters &operator+=(const StateCounters &o);
    bool operator==(const StateCounters &) const = default;
};

/// Per-timestep result of run_timestep.
struct CycleReport {
    std::array<StateCounters, kFsmStateCount> states{};
    uint64_t total_cycles = 0;

    const StateCounters &operator[](FsmState s) const { return states[static_cast<std::size_t>(s)]; }
    bool operator==(const CycleReport &) const = default;
};

struct CycleTrace {
    std::vector<TraceEvent> events;
    std::array<StateCounters, kFsmStateCount> states{};
    uint64_t total_cycles = 0;
    uint32_t timesteps = 0;
    uint64_t mac_lane_ops = 0;        // lanes that carried a connection
    uint64_t mac_active_lane_ops = 0; // of those, lanes whose input spiked
    std::vector<uint64_t> spikes_per_layer;
    std::array<RegionCounters, kRegionCount> regions{};
    uint64_t faults = 0;

    const StateCounters &operator[](FsmState s) const { return states[static_cast<std::size_t>(s)]; }
    StateCounters &operator[](FsmState s) { return states[static_cast<std::size_t>(s)]; }

    uint64_t weight_bits() const;
    /// Fraction of MAC lane operations driven by a spike, in [0, 1].
    double activity() const;

    /// One line per event: cycle,state,kind,layer,timestep,region,count
    std::string events_csv() const;

    bool operator==(const CycleTrace &) const = default;
};

} // namespace ospk
