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
#include <optional>
#include <string>
#include <vector>

#include "ospk/trace.hpp"

namespace ospk {

/// Core clock; the SRAMs run at twice this rate.
struct ClockConfig {
    /// 25 MHz reproduces the reference latencies; 20 MHz is the nominal clock.
    static constexpr double kDefaultCoreHz = 25'000'000.0;
    static constexpr double kNominalCoreHz = 20'000'000.0;

    double core_hz = kDefaultCoreHz;

    double sram_hz() const { return 2.0 * core_hz; }
    void validate() const;
};

/// Power at the fastest corner for a fully active network, in mW.
/// Group totals and their switching parts; internal power is the remainder.
struct PowerModel {
    double seq_dynamic_mw = 33.9;
    double comb_dynamic_mw = 84.8;
    double seq_switching_mw = 2.32;
    double comb_switching_mw = 40.7;
    double leakage_mw = 0.00274;
    double sram_mw = 106.54;

    double core_dynamic_mw() const { return seq_dynamic_mw + comb_dynamic_mw; }
    /// Combinational share of core dynamic power at full activity.
    double combinational_share() const { return comb_dynamic_mw / core_dynamic_mw(); }
};

struct TimingReport {
    std::array<uint64_t, kFsmStateCount> state_cycles{};
    std::array<double, kFsmStateCount> state_seconds{};
    uint64_t total_cycles = 0;
    double total_seconds = 0.0;
    double throughput_per_s = 0.0; // unpipelined: 1 / total
    double core_hz = 0.0;

    double seconds(FsmState s) const { return state_seconds[static_cast<std::size_t>(s)]; }
};

/// Throws ConfigError on an empty trace or an invalid clock.
TimingReport timing_report(const CycleTrace &trace, const ClockConfig &clock);
TimingReport timing_report(const CycleReport &report, const ClockConfig &clock);

struct EnergyComponent {
    std::string name;
    double power_mw = 0.0;
    double energy_uj = 0.0;
    double share = 0.0; // of total energy
};

struct EnergyReport {
    double latency_s = 0.0;
    double activity = 0.0;
    std::vector<EnergyComponent> components; // sequential, combinational, leakage, sram
    double total_power_mw = 0.0;
    double total_energy_uj = 0.0;
    /// Shares of core dynamic power at this activity.
    double sequential_share = 0.0;
    double combinational_share = 0.0;
    uint64_t synaptic_ops = 0;
    double synaptic_ops_per_s = 0.0;
    /// Only set when an ops-per-synapse definition is supplied.
    std::optional<double> gops_per_watt;

    const EnergyComponent &component(const std::string &name) const;
};

/// Energy over `latency_s` with switching power scaled by `activity` in [0, 1].
EnergyReport energy_report(double latency_s, double activity, const PowerModel &power,
                           uint64_t synaptic_ops = 0, std::optional<double> ops_per_synapse = std::nullopt);
/// Activity and synaptic-op count taken from the trace.
EnergyReport energy_report(const CycleTrace &trace, const ClockConfig &clock, const PowerModel &power,
                           std::optional<double> ops_per_synapse = std::nullopt);

struct ReferenceTargets {
    double input_layer_s = 0.120e-6;
    double hidden_layer_s = 10.3e-6;
    double output_layer_s = 10.3e-6;
    double total_s = 20.72e-6;
    double throughput_per_s = 48'262.0;
    double synapses = 1'059'840.0;
    double macro_count = 77.0; // ~154 kB of 2 kB macros
    double memory_bytes = 154.0 * 1024.0;
    double nominal_core_hz = ClockConfig::kNominalCoreHz;
};

struct AuditInputs {
    TimingReport timestep; // one timestep of the canonical network
    std::size_t synapses = 0;
    std::size_t macro_count = 0;
    std::size_t mapped_bytes = 0;
};

struct AuditRow {
    std::string metric;
    double simulated = 0.0;
    double reference = 0.0;
    double relative_error = 0.0;
    bool pass = true;
    bool informational = false; // reported but never fails the audit
};

/// Simulates one timestep of the canonical network to fill the audit inputs.
AuditInputs canonical_audit_inputs(const ClockConfig &clock);

std::vector<AuditRow> consistency_audit(const AuditInputs &inputs, const ReferenceTargets &targets = {},
                                        double tolerance = 0.05);
bool audit_passed(const std::vector<AuditRow> &rows);

} // namespace ospk
