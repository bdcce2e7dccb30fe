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

#include "ospk/report.hpp"

#include <iomanip>
#include <sstream>

namespace ospk {

namespace {

nlohmann::json state_counters(const StateCounters &s)
{
    return {
        {"cycles", s.cycles},
        {"selector_activations", s.selector_activations},
        {"adders_activated", s.adders_activated},
        {"mac_cycles", s.mac_cycles},
        {"peak_mac_units", s.peak_mac_units},
        {"weight_bits", s.weight_bits},
        {"cache_bytes", s.cache_bytes},
        {"spikes", s.spikes},
    };
}

std::string fmt(double v)
{
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

} // namespace

nlohmann::json to_json(const TimingReport &t)
{
    nlohmann::json states = nlohmann::json::object();
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        states[to_string(static_cast<FsmState>(s))] = {
            {"cycles", t.state_cycles[s]},
            {"latency_s", t.state_seconds[s]},
        };
    }
    return {
        {"core_hz", t.core_hz},
        {"states", states},
        {"total_cycles", t.total_cycles},
        {"total_latency_s", t.total_seconds},
        {"throughput_per_s", t.throughput_per_s},
    };
}

nlohmann::json to_json(const EnergyReport &e)
{
    nlohmann::json comps = nlohmann::json::array();
    for (const auto &c : e.components) {
        comps.push_back({{"name", c.name}, {"power_mw", c.power_mw}, {"energy_uj", c.energy_uj}, {"share", c.share}});
    }
    nlohmann::json j = {
        {"latency_s", e.latency_s},
        {"activity", e.activity},
        {"components", comps},
        {"total_power_mw", e.total_power_mw},
        {"total_energy_uj", e.total_energy_uj},
        {"core_dynamic_share", {{"sequential", e.sequential_share}, {"combinational", e.combinational_share}}},
        {"synaptic_ops", e.synaptic_ops},
        {"synaptic_ops_per_s", e.synaptic_ops_per_s},
    };
    j["gops_per_watt"] = e.gops_per_watt ? nlohmann::json(*e.gops_per_watt) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const std::vector<AuditRow> &rows)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto &r : rows) {
        out.push_back({
            {"metric", r.metric},
            {"simulated", r.simulated},
            {"reference", r.reference},
            {"relative_error", r.relative_error},
            {"pass", r.pass},
            {"informational", r.informational},
        });
    }
    return out;
}

nlohmann::json to_json(const CycleReport &r)
{
    nlohmann::json states = nlohmann::json::object();
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        states[to_string(static_cast<FsmState>(s))] = state_counters(r.states[s]);
    }
    return {{"total_cycles", r.total_cycles}, {"states", states}};
}

nlohmann::json trace_summary(const CycleTrace &trace)
{
    nlohmann::json states = nlohmann::json::object();
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        states[to_string(static_cast<FsmState>(s))] = state_counters(trace.states[s]);
    }
    nlohmann::json regions = nlohmann::json::object();
    for (std::size_t r = 0; r < kRegionCount; ++r) {
        const auto &c = trace.regions[r];
        regions[to_string(static_cast<Region>(r))] = {
            {"word_reads", c.word_reads},
            {"word_writes", c.word_writes},
            {"bytes_read", c.bytes_read},
            {"bytes_written", c.bytes_written},
        };
    }
    return {
        {"total_cycles", trace.total_cycles},
        {"timesteps", trace.timesteps},
        {"states", states},
        {"weight_bits", trace.weight_bits()},
        {"mac_lane_ops", trace.mac_lane_ops},
        {"mac_active_lane_ops", trace.mac_active_lane_ops},
        {"activity", trace.activity()},
        {"spikes_per_layer", trace.spikes_per_layer},
        {"regions", regions},
        {"faults", trace.faults},
        {"events", trace.events.size()},
    };
}

std::string timing_csv(const TimingReport &t)
{
    std::ostringstream out;
    out << "state,cycles,latency_s\n";
    for (std::size_t s = 0; s < kFsmStateCount; ++s) {
        out << to_string(static_cast<FsmState>(s)) << ',' << t.state_cycles[s] << ',' << fmt(t.state_seconds[s])
            << '\n';
    }
    out << "total," << t.total_cycles << ',' << fmt(t.total_seconds) << '\n';
    return out.str();
}

std::string energy_csv(const EnergyReport &e)
{
    std::ostringstream out;
    out << "component,power_mw,energy_uj,share\n";
    for (const auto &c : e.components) {
        out << c.name << ',' << fmt(c.power_mw) << ',' << fmt(c.energy_uj) << ',' << fmt(c.share) << '\n';
    }
    out << "total," << fmt(e.total_power_mw) << ',' << fmt(e.total_energy_uj) << ",1\n";
    return out.str();
}

std::string audit_csv(const std::vector<AuditRow> &rows)
{
    std::ostringstream out;
    out << "metric,simulated,reference,relative_error,pass,informational\n";
    for (const auto &r : rows) {
        out << r.metric << ',' << fmt(r.simulated) << ',' << fmt(r.reference) << ',' << fmt(r.relative_error) << ','
            << (r.pass ? "true" : "false") << ',' << (r.informational ? "true" : "false") << '\n';
    }
    return out.str();
}

} // namespace ospk
