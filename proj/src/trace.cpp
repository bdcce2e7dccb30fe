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

#include "ospk/trace.hpp"

#include <algorithm>
#include <sstream>

namespace ospk {

const char *to_string(FsmState s)
{
    switch (s) {
    case FsmState::InputLayer:
        return "input";
    case FsmState::HiddenLayer:
        return "hidden";
    case FsmState::OutputLayer:
        return "output";
    }
    return "?";
}

const char *to_string(EventKind k)
{
    switch (k) {
    case EventKind::StateEnter:
        return "state_enter";
    case EventKind::WeightFetch:
        return "weight_fetch";
    case EventKind::SramRead:
        return "sram_read";
    case EventKind::SramWrite:
        return "sram_write";
    case EventKind::MacAccumulate:
        return "mac_accumulate";
    case EventKind::AdderLatch:
        return "adder_latch";
    case EventKind::SelectorActivate:
        return "selector_activate";
    case EventKind::SpikeEmit:
        return "spike_emit";
    case EventKind::CacheLoad:
        return "cache_load";
    case EventKind::Fault:
        return "fault";
    }
    return "?";
}

StateCounters &StateCounters::operator+=(const StateCounters &o)
{
    cycles += o.cycles;
    selector_activations += o.selector_activations;
    adders_activated += o.adders_activated;
    mac_cycles += o.mac_cycles;
    peak_mac_units = std::max(peak_mac_units, o.peak_mac_units);
    weight_bits += o.weight_bits;
    cache_bytes += o.cache_bytes;
    spikes += o.spikes;
    return *this;
}

uint64_t CycleTrace::weight_bits() const
{
    uint64_t n = 0;
    for (const auto &s : states) {
        n += s.weight_bits;
    }
    return n;
}

double CycleTrace::activity() const
{
    if (mac_lane_ops == 0) {
        return 0.0;
    }
    return static_cast<double>(mac_active_lane_ops) / static_cast<double>(mac_lane_ops);
}

std::string CycleTrace::events_csv() const
{
    std::ostringstream out;
    out << "cycle,state,kind,layer,timestep,region,count\n";
    for (const auto &e : events) {
        out << e.cycle << ',' << to_string(e.state) << ',' << to_string(e.kind) << ',';
        if (e.layer != kNoLayer) {
            out << e.layer;
        }
        out << ',' << e.timestep << ',';
        if (e.kind == EventKind::SramRead || e.kind == EventKind::SramWrite) {
            out << to_string(e.region);
        }
        out << ',' << e.count << '\n';
    }
    return out.str();
}

} // namespace ospk
