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

#include "ospk/perf.hpp"

#include <cmath>
#include <stdexcept>

#include "ospk/core.hpp"
#include "ospk/errors.hpp"

namespace ospk {

namespace {

TimingReport timing_from_cycles(const std::array<uint64_t, kFsmStateCount> &cycles, uint64_t total,
                                const ClockConfig &clock)
{
    clock.validate();
    if (total == 0) {
        throw ConfigError("cannot time an empty trace");
    }
    TimingReport r;
    r.core_hz = clock.core_hz;
    r.state_cycles = cycles;
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        r.state_seconds[s] = static_cast<double>(cycles[s]) / clock.core_hz;
    }
    r.total_cycles = total;
    r.total_seconds = static_cast<double>(total) / clock.core_hz;
    r.throughput_per_s = 1.0 / r.total_seconds;
    return r;
}

double relative_error(double simulated, double target)
{
    return target == 0.0 ? std::abs(simulated) : std::abs(simulated - target) / std::abs(target);
}

} // namespace

void ClockConfig::validate() const
{
    if (!(core_hz > 0.0) || !std::isfinite(core_hz)) {
        throw ConfigError("core clock must be a positive frequency");
    }
}

TimingReport timing_report(const CycleTrace &trace, const ClockConfig &clock)
{
    std::array<uint64_t, kFsmStateCount> cycles{};
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        cycles[s] = trace.states[s].cycles;
    }
    return timing_from_cycles(cycles, trace.total_cycles, clock);
}

TimingReport timing_report(const CycleReport &report, const ClockConfig &clock)
{
    std::array<uint64_t, kFsmStateCount> cycles{};
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        cycles[s] = report.states[s].cycles;
    }
    return timing_from_cycles(cycles, report.total_cycles, clock);
}

const EnergyComponent &EnergyReport::component(const std::string &name) const
{
    for (const auto &c : components) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("no energy component named " + name);
}

EnergyReport energy_report(double latency_s, double activity, const PowerModel &power, uint64_t synaptic_ops,
                           std::optional<double> ops_per_synapse)
{
    if (!(activity >= 0.0 && activity <= 1.0)) {
        throw ConfigError("activity must lie in [0, 1]");
    }
    if (!(latency_s >= 0.0)) {
        throw ConfigError("latency must be non-negative");
    }
    EnergyReport r;
    r.latency_s = latency_s;
    r.activity = activity;

    const double seq = power.seq_dynamic_mw - power.seq_switching_mw + activity * power.seq_switching_mw;
    const double comb = power.comb_dynamic_mw - power.comb_switching_mw + activity * power.comb_switching_mw;
    const std::pair<const char *, double> parts[] = {
        {"sequential", seq},
        {"combinational", comb},
        {"leakage", power.leakage_mw},
        {"sram", power.sram_mw},
    };
    for (const auto &[name, mw] : parts) {
        // mW * s = mJ; 1 mJ = 1e3 uJ.
        r.components.push_back({name, mw, mw * latency_s * 1e3, 0.0});
        r.total_power_mw += mw;
        r.total_energy_uj += mw * latency_s * 1e3;
    }
    for (auto &c : r.components) {
        c.share = r.total_power_mw > 0.0 ? c.power_mw / r.total_power_mw : 0.0;
    }
    r.sequential_share = seq / (seq + comb);
    r.combinational_share = comb / (seq + comb);

    r.synaptic_ops = synaptic_ops;
    if (latency_s > 0.0) {
        r.synaptic_ops_per_s = static_cast<double>(synaptic_ops) / latency_s;
        if (ops_per_synapse) {
            const double watts = r.total_power_mw * 1e-3;
            r.gops_per_watt = r.synaptic_ops_per_s * *ops_per_synapse / 1e9 / watts;
        }
    }
    return r;
}

EnergyReport energy_report(const CycleTrace &trace, const ClockConfig &clock, const PowerModel &power,
                           std::optional<double> ops_per_synapse)
{
    const TimingReport t = timing_report(trace, clock);
    return energy_report(t.total_seconds, trace.activity(), power, trace.weight_bits(), ops_per_synapse);
}

AuditInputs canonical_audit_inputs(const ClockConfig &clock)
{
    const NetworkConfig config = NetworkConfig::canonical();
    CycleSimulator sim(config, WeightStore(config.layers));
    program_frame(sim.memory(), 0, SpikeVector(config.input_width()));
    preload_cache(sim.core(), sim.memory(), 0);
    sim.core().record_events = false;
    const CycleReport ts = run_timestep(sim.core(), sim.memory());

    AuditInputs in;
    in.timestep = timing_report(ts, clock);
    in.synapses = config.total_synapses();
    in.macro_count = sim.map().macro_count();
    in.mapped_bytes = sim.map().mapped_bytes();
    return in;
}

std::vector<AuditRow> consistency_audit(const AuditInputs &in, const ReferenceTargets &ref, double tolerance)
{
    std::vector<AuditRow> rows;
    auto add = [&](std::string metric, double sim, double target, bool informational = false) {
        AuditRow row{std::move(metric), sim, target, relative_error(sim, target), true, informational};
        row.pass = informational || row.relative_error <= tolerance;
        rows.push_back(std::move(row));
    };
    const TimingReport &t = in.timestep;
    add("input_layer_latency_s", t.seconds(FsmState::InputLayer), ref.input_layer_s);
    add("hidden_layer_latency_s", t.seconds(FsmState::HiddenLayer), ref.hidden_layer_s);
    add("output_layer_latency_s", t.seconds(FsmState::OutputLayer), ref.output_layer_s);
    add("total_latency_s", t.total_seconds, ref.total_s);
    add("throughput_per_s", t.throughput_per_s, ref.throughput_per_s);
    add("synapses", static_cast<double>(in.synapses), ref.synapses);
    add("sram_macros", static_cast<double>(in.macro_count), ref.macro_count);
    add("sram_bytes", static_cast<double>(in.mapped_bytes), ref.memory_bytes);
    // Clock implied by the hidden-layer latency vs the nominal clock.
    const double hidden_cycles = static_cast<double>(t.state_cycles[static_cast<std::size_t>(FsmState::HiddenLayer)]);
    add("implied_core_hz_vs_nominal", hidden_cycles / ref.hidden_layer_s, ref.nominal_core_hz, true);
    return rows;
}

bool audit_passed(const std::vector<AuditRow> &rows)
{
    for (const auto &r : rows) {
        if (!r.pass) {
            return false;
        }
    }
    return true;
}

} // namespace ospk
