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

#include "ospk/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ospk/errors.hpp"

namespace ospk {

namespace {

uint32_t ceil_div(std::size_t a, std::size_t b) { return static_cast<uint32_t>((a + b - 1) / b); }

std::size_t frame_bytes(const CoreState &core) { return (core.config.input_width() + 7) / 8; }

std::vector<PhasePlan> make_plans(const NetworkConfig &config, const WeightLayout &layout)
{
    const std::size_t last = config.layers.size() - 1;
    std::vector<PhasePlan> plans;

    PhasePlan input;
    input.state = FsmState::InputLayer;
    input.finalize_layer = last;
    input.selector_cycles = ceil_div(config.output_width(), kSelectorGroup);
    input.mac_layer = 0;
    input.mac_start = input.selector_cycles + kInputInitCycles;
    input.mac_cycles = kInputAccumulateCycles;
    input.length = input.mac_start + input.mac_cycles;
    plans.push_back(input);

    for (std::size_t l = 1; l <= last; ++l) {
        PhasePlan p;
        p.state = l == last ? FsmState::OutputLayer : FsmState::HiddenLayer;
        p.mac_layer = l;
        p.mac_cycles = static_cast<uint32_t>(layout.blocks(l).size());
        p.finalize_layer = l - 1;
        p.selector_cycles = ceil_div(config.layers[l - 1].fan_out, kSelectorGroup);
        if (l == last) {
            p.cache_cycles = ceil_div((config.input_width() + 7) / 8, kCacheLoadBytesPerCycle);
        }
        p.length = std::max({p.mac_cycles, p.selector_cycles, p.cache_cycles});
        plans.push_back(p);
    }
    return plans;
}

class Ticker {
public:
    Ticker(CoreState &core, MemorySystem &mem) : core_(core), mem_(mem), plan_(core.plan()) {}

    void run()
    {
        const uint32_t idx = core_.fsm.cycle_in_state;
        if (idx == 0) {
            emit(EventKind::StateEnter, plan_.length);
        }
        land_responses();
        if (idx < plan_.selector_cycles) {
            const bool has_work = plan_.state != FsmState::InputLayer || core_.output_pending;
            if (has_work) {
                finalize_group(idx);
            }
            if (plan_.state == FsmState::InputLayer && idx + 1 == plan_.selector_cycles) {
                core_.output_pending = false;
            }
        }
        if (idx >= plan_.mac_start && idx < plan_.mac_start + plan_.mac_cycles) {
            mac_cycle(idx - plan_.mac_start);
        }
        if (idx + 1 == plan_.length) {
            latch_adders();
        }
        advance();
    }

private:
    void emit(EventKind kind, uint32_t count, uint16_t layer = kNoLayer, Region region = Region::Weights)
    {
        emit_at(kind, count, layer, core_.fsm.timestep, region);
    }
    void emit_at(EventKind kind, uint32_t count, uint16_t layer, uint32_t timestep, Region region)
    {
        if (core_.record_events) {
            core_.trace.events.push_back(
                {core_.cycle, plan_.state, kind, layer, timestep, region, count});
        }
    }
    StateCounters &counters() { return core_.trace[plan_.state]; }

    void land_responses()
    {
        if (core_.pending_weights && core_.pending_weights->ready_cycle == core_.cycle) {
            const PendingWeights p = *core_.pending_weights;
            const FetchBlock &b = core_.layout.blocks(p.layer)[p.block];
            const auto src = mem_.contents(Region::Weights);
            core_.weight_latch.assign((b.bits + 7) / 8, 0);
            for (std::size_t i = 0; i < b.bits; ++i) {
                const std::size_t s = b.bit_offset + i;
                if ((src[s / 8] >> (s % 8)) & 1U) {
                    core_.weight_latch[i / 8] = static_cast<uint8_t>(core_.weight_latch[i / 8] | (1U << (i % 8)));
                }
            }
            core_.latched_block_bits = b.bits;
            core_.pending_weights.reset();
        }

        auto &pending = core_.pending_cache;
        for (auto it = pending.begin(); it != pending.end();) {
            if (it->ready_cycle != core_.cycle) {
                ++it;
                continue;
            }
            const auto src = mem_.contents(Region::Inputs);
            const std::size_t first = it->chunk * kCacheLoadBytesPerCycle;
            const std::size_t n = std::min(kCacheLoadBytesPerCycle, frame_bytes(core_) - first);
            std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(it->frame_offset), n,
                        core_.spikes.cache.begin() + static_cast<std::ptrdiff_t>(first));
            counters().cache_bytes += n;
            emit(EventKind::CacheLoad, static_cast<uint32_t>(n));
            it = pending.erase(it);
        }
    }

    void finalize_group(uint32_t group)
    {
        const std::size_t layer = plan_.finalize_layer;
        const NeuronParams &p = core_.config.params[layer];
        LayerStorage &st = core_.layers[layer];
        const std::size_t width = st.potential.size();
        const std::size_t first = std::size_t{group} * kSelectorGroup;
        const std::size_t last = std::min(first + kSelectorGroup, width);
        const std::size_t k = last - first;
        const bool is_output = layer + 1 == core_.layers.size();
        // Output results are saved in the following timestep's input state.
        const uint32_t origin = plan_.state == FsmState::InputLayer ? core_.fsm.timestep - 1 : core_.fsm.timestep;

        uint32_t spikes = 0;
        for (std::size_t n = first; n < last; ++n) {
            // MAU: decay the stored potential.
            const QFixed decayed = decay_shift_add(st.potential[n], p.beta);
            // Potential adder: add this layer's synaptic input.
            QFixed u = sat_add(decayed, core_.adders[n].held_potential);
            if (p.reset_mode == ResetMode::SubtractHigh && st.spiked.test(n)) {
                u = sat_sub(u, p.u_thr_high);
            }
            // Schmitt trigger: a released neuron compares against the high
            // threshold; once latched it holds until u drops below the low one.
            const bool latched = st.inhibited.test(n);
            const bool spike = !latched && u > p.u_thr_high;
            const bool latch_next = spike || u >= p.u_thr_low;

            st.potential[n] = (spike && p.reset_mode == ResetMode::ToZero) ? QFixed::zero() : u;
            st.inhibited.set(n, latch_next);
            st.spiked.set(n, spike);
            core_.spikes.emitted.set(n, spike);
            if (spike) {
                ++spikes;
                if (is_output) {
                    ++core_.class_counts[n];
                }
            }
        }
        core_.selector.cursor = last == width ? 0 : last;

        const std::size_t spike_bytes = (k + 7) / 8;
        mem_.record(Region::Potentials, 2 * k, false);
        mem_.record(Region::Decay, k, false);
        mem_.record(Region::Thresholds, 2 * k, false);
        mem_.record(Region::Spikes, spike_bytes, false);
        mem_.record(Region::Potentials, 2 * k, true);
        mem_.record(Region::Thresholds, 2 * k, true);
        mem_.record(Region::Spikes, spike_bytes, true);

        StateCounters &sc = counters();
        ++sc.selector_activations;
        sc.adders_activated += k;
        sc.spikes += spikes;
        core_.trace.spikes_per_layer[layer] += spikes;

        const auto tag = static_cast<uint16_t>(layer);
        const auto kk = static_cast<uint32_t>(k);
        emit_at(EventKind::SelectorActivate, kk, tag, origin, Region::Weights);
        emit_at(EventKind::SramRead, 2 * kk, tag, origin, Region::Potentials);
        emit_at(EventKind::SramRead, kk, tag, origin, Region::Decay);
        emit_at(EventKind::SramRead, 2 * kk, tag, origin, Region::Thresholds);
        emit_at(EventKind::SramRead, static_cast<uint32_t>(spike_bytes), tag, origin, Region::Spikes);
        emit_at(EventKind::SramWrite, 2 * kk, tag, origin, Region::Potentials);
        emit_at(EventKind::SramWrite, 2 * kk, tag, origin, Region::Thresholds);
        emit_at(EventKind::SramWrite, static_cast<uint32_t>(spike_bytes), tag, origin, Region::Spikes);
        if (spikes != 0) {
            emit_at(EventKind::SpikeEmit, spikes, tag, origin, Region::Weights);
        }
    }

    void mac_cycle(uint32_t block)
    {
        const std::size_t layer = plan_.mac_layer;
        const FetchBlock &b = core_.layout.blocks(layer)[block];
        if (core_.latched_block_bits != b.bits || core_.pending_weights) {
            throw std::logic_error("weights for layer " + std::to_string(layer) + " block " +
                                      std::to_string(block) + " did not arrive in time");
        }
        const std::size_t fan_out = core_.config.layers[layer].fan_out;
        const std::size_t lanes = b.lanes;
        const std::size_t first_pre = std::size_t{block} * kMacLanes;
        const auto &latch = core_.weight_latch;
        auto weight_bit = [&](std::size_t i) { return (latch[i / 8] >> (i % 8)) & 1U; };

        uint64_t active = 0;
        if (layer == 0) {
            for (std::size_t j = 0; j < fan_out; ++j) {
                if (core_.spikes.cache_bit(j)) {
                    core_.macs[j].accumulator = static_cast<int16_t>(core_.macs[j].accumulator + (weight_bit(j) ? 1 : -1));
                    ++active;
                }
            }
        } else {
            for (std::size_t k = 0; k < lanes; ++k) {
                if (!core_.spikes.emitted.test(first_pre + k)) {
                    continue;
                }
                for (std::size_t j = 0; j < fan_out; ++j) {
                    const int16_t w = weight_bit(j * lanes + k) ? 1 : -1;
                    core_.macs[j].accumulator = static_cast<int16_t>(core_.macs[j].accumulator + w);
                }
                active += fan_out;
            }
        }
        core_.trace.mac_lane_ops += fan_out * lanes;
        core_.trace.mac_active_lane_ops += active;

        StateCounters &sc = counters();
        ++sc.mac_cycles;
        sc.peak_mac_units = std::max<uint64_t>(sc.peak_mac_units, fan_out);
        sc.weight_bits += b.bits;
        emit(EventKind::MacAccumulate, static_cast<uint32_t>(fan_out), static_cast<uint16_t>(layer));
    }

    void latch_adders()
    {
        const std::size_t layer = plan_.mac_layer;
        const std::size_t fan_out = core_.config.layers[layer].fan_out;
        for (std::size_t j = 0; j < fan_out; ++j) {
            core_.adders[j].held_potential = QFixed::from_count(core_.macs[j].accumulator);
            core_.macs[j].accumulator = 0;
        }
        if (plan_.state == FsmState::OutputLayer) {
            core_.output_pending = true;
        }
        emit(EventKind::AdderLatch, static_cast<uint32_t>(fan_out), static_cast<uint16_t>(layer));
    }

    void issue_requests(std::size_t phase, uint32_t idx)
    {
        const PhasePlan &next = core_.plans[phase];
        if (idx >= next.mac_start && idx < next.mac_start + next.mac_cycles) {
            const std::size_t block = idx - next.mac_start;
            const FetchBlock &b = core_.layout.blocks(next.mac_layer)[block];
            const auto tickets = mem_.read_span(Region::Weights, b.first_word() * SramMacro::kWordBytes,
                                                b.word_count() * SramMacro::kWordBytes);
            core_.pending_weights = PendingWeights{next.mac_layer, block, tickets.front().ready_cycle};
            emit(EventKind::WeightFetch, static_cast<uint32_t>(b.bits), static_cast<uint16_t>(next.mac_layer));
            emit(EventKind::SramRead, static_cast<uint32_t>(tickets.size() * SramMacro::kWordBytes), kNoLayer,
                 Region::Weights);
        }
        if (idx < next.cache_cycles) {
            const std::size_t first = std::size_t{idx} * kCacheLoadBytesPerCycle;
            const std::size_t n = std::min(kCacheLoadBytesPerCycle, frame_bytes(core_) - first);
            const std::size_t offset = core_.frame_slot * frame_bytes(core_) + first;
            const auto tickets = mem_.read_span(Region::Inputs, offset, n);
            core_.pending_cache.push_back({idx, offset, tickets.front().ready_cycle});
            emit(EventKind::SramRead, static_cast<uint32_t>(n), kNoLayer, Region::Inputs);
        }
    }

    void advance()
    {
        ControlFsm &fsm = core_.fsm;
        std::size_t phase = fsm.phase;
        uint32_t idx = fsm.cycle_in_state + 1;
        if (idx == plan_.length) {
            phase = (phase + 1) % core_.plans.size();
            idx = 0;
        }
        issue_requests(phase, idx);

        fsm.phase = phase;
        fsm.cycle_in_state = idx;
        fsm.state = core_.plans[phase].state;
        if (idx == 0 && phase == 0) {
            ++fsm.timestep;
            ++core_.trace.timesteps;
        }
    }

    CoreState &core_;
    MemorySystem &mem_;
    const PhasePlan &plan_;
};

} // namespace

uint32_t CoreState::timestep_cycles() const
{
    uint32_t n = 0;
    for (const auto &p : plans) {
        n += p.length;
    }
    return n;
}

CoreState reset(const NetworkConfig &config)
{
    config.validate_for_hardware();
    CoreState core;
    core.config = config;
    core.layout = WeightLayout(config.layers);
    core.plans = make_plans(config, core.layout);
    core.macs.assign(kHardwareNeurons, MacUnit{});
    core.adders.assign(kHardwareNeurons, PotentialAdder{});
    for (const auto &l : config.layers) {
        core.layers.push_back({std::vector<QFixed>(l.fan_out), SpikeVector(l.fan_out), SpikeVector(l.fan_out)});
    }
    core.class_counts.assign(config.output_width(), 0);
    core.trace.spikes_per_layer.assign(config.layers.size(), 0);
    return core;
}

std::span<const TraceEvent> tick(CoreState &core, MemorySystem &mem)
{
    const std::size_t first_event = core.trace.events.size();
    const FsmState state = core.fsm.state;
    mem.begin_cycle(core.cycle);
    try {
        Ticker(core, mem).run();
    } catch (const SimulationFault &) {
        ++core.trace.faults;
        if (core.record_events) {
            core.trace.events.push_back({core.cycle, state, EventKind::Fault, kNoLayer, core.fsm.timestep,
                                         Region::Weights, 1});
        }
        throw;
    }
    ++core.trace[state].cycles;
    ++core.trace.total_cycles;
    ++core.cycle;
    return std::span<const TraceEvent>(core.trace.events).subspan(first_event);
}

CycleReport run_timestep(CoreState &core, MemorySystem &mem, uint64_t max_cycles)
{
    if (core.fsm.phase != 0 || core.fsm.cycle_in_state != 0) {
        throw ConfigError("run_timestep must start at the input-layer entry");
    }
    const auto before = core.trace.states;
    uint64_t cycles = 0;
    do {
        if (cycles == max_cycles) {
            ++core.trace.faults;
            if (core.record_events) {
                core.trace.events.push_back({core.cycle, core.fsm.state, EventKind::Fault, kNoLayer,
                                             core.fsm.timestep, Region::Weights, 1});
            }
            throw SimulationFault(FaultKind::Livelock,
                                  "timestep did not complete within " + std::to_string(max_cycles) + " cycles");
        }
        tick(core, mem);
        ++cycles;
    } while (core.fsm.phase != 0 || core.fsm.cycle_in_state != 0);

    CycleReport report;
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        StateCounters d = core.trace.states[s];
        const StateCounters &b = before[s];
        d.cycles -= b.cycles;
        d.selector_activations -= b.selector_activations;
        d.adders_activated -= b.adders_activated;
        d.mac_cycles -= b.mac_cycles;
        d.weight_bits -= b.weight_bits;
        d.cache_bytes -= b.cache_bytes;
        d.spikes -= b.spikes;
        report.states[s] = d;
    }
    report.total_cycles = cycles;
    return report;
}

void drain(CoreState &core, MemorySystem &mem)
{
    if (!core.output_pending) {
        return;
    }
    if (core.fsm.phase != 0 || core.fsm.cycle_in_state != 0) {
        throw ConfigError("drain must start at the input-layer entry");
    }
    const uint32_t save_cycles = core.plans.front().selector_cycles;
    for (uint32_t i = 0; i < save_cycles; ++i) {
        tick(core, mem);
    }
}

void preload_cache(CoreState &core, const MemorySystem &mem, std::size_t slot)
{
    const std::size_t n = frame_bytes(core);
    const auto src = mem.contents(Region::Inputs);
    core.spikes.cache.fill(0);
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(slot * n), n, core.spikes.cache.begin());
    core.frame_slot = slot;
}

InferenceResult run_inference(CoreState &core, MemorySystem &mem, const SpikeVector &frame, uint32_t timesteps)
{
    if (timesteps == 0) {
        throw ConfigError("timestep count must be at least 1");
    }
    if (frame.size() != core.config.input_width()) {
        throw ConfigError("input frame has " + std::to_string(frame.size()) + " pixels, expected " +
                          std::to_string(core.config.input_width()));
    }
    const bool record = core.record_events;
    core = reset(core.config);
    core.record_events = record;

    std::array<RegionCounters, kRegionCount> before;
    for (std::size_t r = 0; r < kRegionCount; ++r) {
        before[r] = mem.counters(static_cast<Region>(r));
    }

    program_frame(mem, 0, frame);
    preload_cache(core, mem, 0);

    InferenceResult result;
    for (uint32_t t = 0; t < timesteps; ++t) {
        result.timesteps.push_back(run_timestep(core, mem));
    }
    drain(core, mem);

    for (std::size_t r = 0; r < kRegionCount; ++r) {
        const RegionCounters &now = mem.counters(static_cast<Region>(r));
        RegionCounters &d = core.trace.regions[r];
        d.word_reads = now.word_reads - before[r].word_reads;
        d.word_writes = now.word_writes - before[r].word_writes;
        d.bytes_read = now.bytes_read - before[r].bytes_read;
        d.bytes_written = now.bytes_written - before[r].bytes_written;
    }

    result.spike_counts = core.class_counts;
    result.prediction = static_cast<std::size_t>(
        std::max_element(result.spike_counts.begin(), result.spike_counts.end()) - result.spike_counts.begin());
    result.trace = core.trace;
    return result;
}

CycleSimulator::CycleSimulator(NetworkConfig config, const WeightStore &weights)
    : core_(reset(config)), mem_(build_memory_map(config))
{
    if (weights.dims() != config.layers) {
        throw ConfigError("weight store dimensions do not match the network config");
    }
    program_weights(mem_, core_.layout, weights);
}

InferenceResult CycleSimulator::run(const SpikeVector &frame, uint32_t timesteps)
{
    return run_inference(core_, mem_, frame, timesteps);
}

} // namespace ospk
