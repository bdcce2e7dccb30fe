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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ospk/core.hpp"
#include "ospk/frame.hpp"
#include "ospk/golden.hpp"
#include "ospk/perf.hpp"

using namespace ospk;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> check;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---- independent arithmetic oracles

int64_t floor_div_pow2(int64_t u, int k)
{
    const int64_t d = int64_t{1} << k;
    int64_t q = u / d;
    if (u % d != 0 && u < 0) {
        --q;
    }
    return q;
}

int64_t oracle_decay(int64_t u, unsigned bits)
{
    int64_t acc = 0;
    for (int k = 1; k <= 8; ++k) {
        if ((bits >> (k - 1)) & 1U) {
            acc = std::clamp<int64_t>(acc + floor_div_pow2(u, k), -32768, 32767);
        }
    }
    return acc;
}

int64_t oracle_round_beta(int64_t u, unsigned bits)
{
    int64_t num = 0;
    for (int k = 1; k <= 8; ++k) {
        if ((bits >> (k - 1)) & 1U) {
            num += int64_t{1} << (8 - k);
        }
    }
    const int64_t p = num * u;
    int64_t q = floor_div_pow2(p, 8);
    const int64_t r = p - q * 256;
    if (r > 128 || (r == 128 && (q & 1) != 0)) {
        ++q;
    }
    return q;
}

// ---- criteria

Outcome synapse_count()
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    // 1024 x 1 + 1024 x 1024 + 1024 x 10
    const std::size_t expect = 1024 + 1024 * 1024 + 1024 * 10;
    const std::size_t got = cfg.total_synapses();
    const std::size_t stored = WeightStore(cfg.layers).total_synapses();
    return {got == 1059840 && expect == 1059840 && stored == got,
            fmt("config %zu, weight store %zu, expected 1059840 (exact)", got, stored)};
}

Outcome cycle_budget()
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    CycleSimulator sim(cfg, WeightStore::random(cfg.layers, 1));
    const InferenceResult r = sim.run(encode_frame(random_image(1)), 3);
    bool ok = r.timesteps.size() == 3;
    for (const CycleReport &ts : r.timesteps) {
        ok = ok && ts[FsmState::InputLayer].cycles == 3 && ts[FsmState::HiddenLayer].cycles == 256 &&
             ts[FsmState::OutputLayer].cycles == 256 && ts[FsmState::HiddenLayer].selector_activations == 64 &&
             ts[FsmState::OutputLayer].cache_bytes == 128;
    }
    // cache loads per output state: count the cycles that landed a chunk
    std::map<uint32_t, std::pair<int, uint32_t>> loads;
    for (const TraceEvent &e : r.trace.events) {
        if (e.kind == EventKind::CacheLoad) {
            loads[e.timestep].first += 1;
            loads[e.timestep].second += e.count;
        }
    }
    for (const auto &[t, l] : loads) {
        ok = ok && l.first == 8 && l.second == 128 && t < 3;
    }
    ok = ok && loads.size() == 3;
    const CycleReport &ts = r.timesteps.front();
    return {ok, fmt("input %llu, hidden %llu, output %llu cycles; selector sweep %llu; cache load %d cycles "
                    "(expected 3/256/256, 64, 8; exact)",
                    static_cast<unsigned long long>(ts[FsmState::InputLayer].cycles),
                    static_cast<unsigned long long>(ts[FsmState::HiddenLayer].cycles),
                    static_cast<unsigned long long>(ts[FsmState::OutputLayer].cycles),
                    static_cast<unsigned long long>(ts[FsmState::HiddenLayer].selector_activations),
                    loads.empty() ? 0 : loads.begin()->second.first)};
}

Outcome table_timing()
{
    const TimingReport t = canonical_audit_inputs(ClockConfig{25e6}).timestep;
    const double e_in = rel(t.seconds(FsmState::InputLayer), 0.120e-6);
    const double e_hid = rel(t.seconds(FsmState::HiddenLayer), 10.3e-6);
    const double e_out = rel(t.seconds(FsmState::OutputLayer), 10.3e-6);
    const double e_tot = rel(t.total_seconds, 20.72e-6);
    const double e_thr = rel(t.throughput_per_s, 48262.0);
    const bool timing_ok = std::max({e_in, e_hid, e_out, e_tot, e_thr}) <= 0.05;

    // the nominal 20 MHz clock must be flagged
    const auto slow = consistency_audit(canonical_audit_inputs(ClockConfig{20e6}));
    double slow_hidden_err = 0.0;
    bool slow_flagged = false;
    for (const auto &row : slow) {
        if (row.metric == "hidden_layer_latency_s") {
            slow_hidden_err = row.relative_error;
            slow_flagged = !row.pass;
        }
    }
    const bool audit_ok = audit_passed(consistency_audit(canonical_audit_inputs(ClockConfig{25e6})));
    return {timing_ok && audit_ok && slow_flagged && std::abs(slow_hidden_err - 0.243) < 0.01,
            fmt("@25 MHz: input %.3f us (%.2f%%), hidden %.2f us (%.2f%%), output %.2f us (%.2f%%), total %.2f us "
                "(%.2f%%), %.0f img/s (%.2f%%), tol 5%%; @20 MHz hidden off by %.1f%% -> %s",
                t.seconds(FsmState::InputLayer) * 1e6, e_in * 100, t.seconds(FsmState::HiddenLayer) * 1e6,
                e_hid * 100, t.seconds(FsmState::OutputLayer) * 1e6, e_out * 100, t.total_seconds * 1e6,
                e_tot * 100, t.throughput_per_s, e_thr * 100, slow_hidden_err * 100,
                slow_flagged ? "flagged" : "NOT flagged")};
}

Outcome memory_footprint()
{
    const MemoryMap map = build_memory_map(NetworkConfig::canonical());
    const std::size_t target = 154 * 1024;
    const std::size_t mapped = map.mapped_bytes();
    const std::size_t diff = mapped > target ? mapped - target : target - mapped;
    const std::size_t weights = map.region(Region::Weights).size;
    const CoreState core = reset(NetworkConfig::canonical());
    const bool ok = diff <= SramMacro::kCapacityBytes && map.macro_count() == 77 && weights == 132480 &&
                    core.spikes.cache.size() == 128 && kSpikeCacheBytes == 128;
    return {ok, fmt("%zu macros (expected 77), %zu B mapped vs %zu B (diff %zu <= 2048), weights %zu B "
                    "(expected 132480), spike cache %zu B (expected 128)",
                    map.macro_count(), mapped, target, diff, weights, core.spikes.cache.size())};
}

Outcome equivalence()
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    constexpr int kPairs = 100;
    constexpr uint32_t kT = 10;
    std::atomic<int> next{0};
    std::atomic<int> mismatches{0};
    std::atomic<uint64_t> output_spikes{0};
    auto worker = [&] {
        for (int seed = next++; seed < kPairs; seed = next++) {
            const WeightStore w = WeightStore::random(cfg.layers, static_cast<uint64_t>(seed));
            const SpikeVector frame = encode_frame(random_image(static_cast<uint64_t>(seed) + 100000));
            const auto golden = network_forward(frame, cfg, w, kT);
            CycleSimulator sim(cfg, w);
            sim.core().record_events = false;
            const auto cycle = sim.run(frame, kT).spike_counts;
            if (golden != cycle) {
                ++mismatches;
            }
            for (uint32_t c : golden) {
                output_spikes += c;
            }
        }
    };
    const unsigned n = std::max(1U, std::min(8U, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    return {mismatches == 0 && output_spikes > 0,
            fmt("%d/%d (weights, image) pairs at T=%u bit-exact; %llu output spikes compared", kPairs - mismatches.load(),
                kPairs, kT, static_cast<unsigned long long>(output_spikes.load()))};
}

Outcome decay_property()
{
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> uraw(-32768, 32767);
    std::uniform_int_distribution<int> code(0, 255);
    constexpr int kPairs = 200000;
    int exact_fail = 0;
    int bound_fail = 0;
    int64_t worst = 0;
    for (int i = 0; i < kPairs; ++i) {
        const int u = uraw(rng);
        const unsigned bits = static_cast<unsigned>(code(rng));
        const int got = decay_shift_add(QFixed::from_raw(static_cast<int16_t>(u)), DecayCode{static_cast<uint8_t>(bits)}).raw();
        exact_fail += got != oracle_decay(u, bits);
        const int64_t err = std::llabs(got - oracle_round_beta(u, bits));
        worst = std::max(worst, err);
        bound_fail += err > std::popcount(bits);
    }
    return {exact_fail == 0 && bound_fail == 0,
            fmt("%d random (u, beta) pairs: %d oracle mismatches, %d rounding-bound violations (max error %lld LSB)",
                kPairs, exact_fail, bound_fail, static_cast<long long>(worst))};
}

Outcome hysteresis()
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> thr(1, 3000);
    std::uniform_int_distribution<int> step(-4000, 4000);
    int violations = 0;
    long spikes = 0;
    constexpr int kTrajectories = 20000;
    for (int trial = 0; trial < kTrajectories; ++trial) {
        const int a = thr(rng), b = thr(rng);
        NeuronParams p;
        p.u_thr_high = QFixed::from_raw(static_cast<int16_t>(std::max(a, b)));
        p.u_thr_low = QFixed::from_raw(static_cast<int16_t>(std::min(a, b)));
        bool inhibited = false;
        bool released = true;
        int u = 0;
        for (int t = 0; t < 100; ++t) {
            u = std::clamp(u + step(rng), -32768, 32767);
            const SchmittOutput out = schmitt_step(QFixed::from_raw(static_cast<int16_t>(u)), inhibited, p);
            if (out.spike) {
                violations += !released;
                released = false;
                ++spikes;
            } else if (u < p.u_thr_low.raw()) {
                released = true;
            }
            inhibited = out.inhibited;
        }
    }

    // degenerate band with subtract reset and beta = 0 against a direct threshold recurrence
    int degenerate_mismatch = 0;
    NeuronParams d;
    d.u_thr_high = d.u_thr_low = QFixed::from_count(1);
    d.beta = DecayCode{};
    d.reset_mode = ResetMode::SubtractHigh;
    std::uniform_int_distribution<int> drive(-600, 600);
    for (int trial = 0; trial < 2000; ++trial) {
        NeuronState s;
        bool z = false;
        int plain_u = 0;
        bool plain_z = false;
        bool plain_hold = false;
        for (int t = 0; t < 100; ++t) {
            const int x = drive(rng);
            s = membrane_update(s, QFixed::from_raw(static_cast<int16_t>(x)), z, d);
            const SchmittOutput out = schmitt_step(s.u, s.inhibited, d);
            s.inhibited = out.inhibited;
            z = out.spike;
            plain_u = x - (plain_z ? 256 : 0);
            plain_z = plain_u > 256 && !plain_hold;
            plain_hold = plain_z || plain_u >= 256;
            degenerate_mismatch += (z != plain_z) || (s.u.raw() != plain_u);
        }
    }
    return {violations == 0 && degenerate_mismatch == 0 && spikes > 0,
            fmt("%d trajectories, %ld spikes, %d re-fires without release; degenerate band: %d mismatches vs "
                "threshold recurrence",
                kTrajectories, spikes, violations, degenerate_mismatch)};
}

Outcome energy_calibration()
{
    const PowerModel p;
    const TimingReport t = canonical_audit_inputs(ClockConfig{}).timestep;
    const EnergyReport e = energy_report(t.total_seconds, 1.0, p);
    // (119 mW + 106.54 mW) x latency, mW x s -> uJ
    const double oracle = (119.0 + 106.54) * t.total_seconds * 1e3;
    const double at_ref = energy_report(20.72e-6, 1.0, p).total_energy_uj;
    const double share = e.combinational_share * 100.0;
    const bool ok = rel(e.total_energy_uj, oracle) <= 0.01 && rel(at_ref, 4.67) <= 0.01 &&
                    std::abs(share - 71.5) <= 0.1 && e.combinational_share == p.combinational_share();
    return {ok, fmt("%.4f uJ vs %.4f uJ (%.2f%%, tol 1%%); at 20.72 us %.3f uJ vs 4.67; combinational %.2f%% of core "
                    "dynamic vs 71.5%% (tol 0.1 pt)",
                    e.total_energy_uj, oracle, rel(e.total_energy_uj, oracle) * 100, at_ref, share)};
}

} // namespace

int main()
{
    std::vector<Criterion> criteria = {
        {1, "synapse count", 1.0, synapse_count},
        {2, "cycle budget", 1.0, cycle_budget},
        {3, "latency table", 1.0, table_timing},
        {4, "memory footprint", 1.0, memory_footprint},
        {5, "golden/cycle equivalence", 300.0, equivalence},
        {6, "shift-and-add decay", 30.0, decay_property},
        {7, "hysteresis", 30.0, hysteresis},
        {8, "energy calibration", 1.0, energy_calibration},
    };
    std::map<int, bool> passed;
    int failures = 0;
    for (const Criterion &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = c.check();
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > c.budget_s) {
            o.pass = false;
            o.detail += fmt(" [runtime %.2f s exceeds %.0f s]", dt, c.budget_s);
        }
        passed[c.id] = o.pass;
        failures += !o.pass;
        std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), dt);
    }
    // Accuracy figures need trained weights and datasets, and the GOPS/W figure has no
    // derivable ops definition; neither is reproduced. The oracle suites above stand in.
    const bool substitutes = passed[5] && passed[6] && passed[7];
    failures += !substitutes;
    std::printf("%s 9 not reproduced: trained-network accuracy and GOPS/W are out of scope; substitute "
                "criteria 5-7 %s\n",
                substitutes ? "PASS" : "FAIL", substitutes ? "passed" : "did not pass");
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
