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

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"

#include "ospk/errors.hpp"
#include "ospk/memory.hpp"

using namespace ospk;

namespace {

NetworkConfig random_config(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> depth(2, 5);
    std::uniform_int_distribution<uint32_t> width(1, 1024);
    std::vector<uint32_t> widths(static_cast<std::size_t>(depth(rng)));
    for (auto &w : widths) {
        w = width(rng);
    }
    return NetworkConfig::dense(widths);
}

// Every fetch block must touch each macro at most twice (two ports).
bool striping_conflict_free(const MemoryMap &map, const WeightLayout &layout, std::size_t layers)
{
    for (std::size_t l = 0; l < layers; ++l) {
        for (const FetchBlock &b : layout.blocks(l)) {
            std::map<std::size_t, int> uses;
            for (std::size_t w = b.first_word(); w < b.first_word() + b.word_count(); ++w) {
                if (++uses[map.macro_of(Region::Weights, w * SramMacro::kWordBytes)] > SramMacro::kPorts) {
                    return false;
                }
            }
        }
    }
    return true;
}

} // namespace

TEST_CASE("canonical memory map")
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    const MemoryMap map = build_memory_map(cfg);
    // 1,059,840 bits / 8
    CHECK(map.region(Region::Weights).size == 132480);
    CHECK(map.region(Region::Weights).macro_count == 65);
    CHECK(map.region(Region::Potentials).size == 2048);
    CHECK(map.region(Region::Decay).size == 1024);
    CHECK(map.region(Region::Thresholds).size == 2048);
    CHECK(map.region(Region::Spikes).size == 16 * 128);
    CHECK(map.region(Region::Inputs).size == 16384);
    CHECK(map.macro_count() == 77);
    CHECK(map.mapped_bytes() == 157696);
    CHECK(map.content_bytes() == 132480 + 2048 + 1024 + 2048 + 2048 + 16384);
    // within one macro of 154 * 1024
    CHECK(std::max(map.mapped_bytes(), std::size_t{157696}) - std::min(map.mapped_bytes(), std::size_t{157696}) <=
          2048);
    CHECK(map.mapped_bytes() == 154 * 1024);

    const Region order[] = {Region::Weights, Region::Potentials, Region::Decay,
                            Region::Thresholds, Region::Spikes, Region::Inputs};
    std::size_t expect_base = 0;
    for (Region r : order) {
        CHECK(map.region(r).base == expect_base);
        expect_base += map.region(r).capacity();
    }
    CHECK(build_memory_map(cfg).regions().size() == kRegionCount);
}

TEST_CASE("canonical weight striping is conflict free")
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    const MemoryMap map = build_memory_map(cfg);
    const WeightLayout layout(cfg.layers);
    CHECK(layout.total_bits() == 1059840);
    CHECK(layout.total_bytes() == 132480);
    // hidden layer: 1024 MACs x 4 lanes per cycle
    const auto hidden = layout.blocks(1);
    CHECK(hidden.size() == 256);
    for (const auto &b : hidden) {
        CHECK(b.bits == 4096);
        CHECK(b.word_count() == 64);
    }
    CHECK(layout.blocks(0).size() == 1);
    CHECK(layout.blocks(0)[0].bits == 1024);
    CHECK(layout.blocks(2).size() == 256);
    CHECK(layout.blocks(2)[0].bits == 40);
    CHECK(layout.peak_words_per_cycle() == 64);
    CHECK(striping_conflict_free(map, layout, 3));

    // the stream covers each synapse exactly once
    std::vector<bool> seen(layout.total_bits(), false);
    for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
        for (std::size_t j = 0; j < cfg.layers[l].fan_out; ++j) {
            for (std::size_t i = 0; i < cfg.layers[l].fan_in; ++i) {
                const std::size_t s = layout.stream_bit(l, j, i);
                REQUIRE(s < seen.size());
                REQUIRE_FALSE(seen[s]);
                seen[s] = true;
            }
        }
    }
}

TEST_CASE("memory map properties over random configs")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const NetworkConfig cfg = random_config(rng);
        const MemoryMap map = build_memory_map(cfg);
        std::size_t macros = 0;
        std::vector<std::pair<std::size_t, std::size_t>> spans;
        for (const RegionExtent &r : map.regions()) {
            REQUIRE(r.base % SramMacro::kCapacityBytes == 0);
            REQUIRE(r.base == r.first_macro * SramMacro::kCapacityBytes);
            REQUIRE(r.size <= r.capacity());
            REQUIRE(r.macro_count >= 1);
            spans.emplace_back(r.base, r.base + r.capacity());
            macros += r.macro_count;
        }
        std::sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i) {
            REQUIRE(spans[i - 1].second <= spans[i].first);
        }
        REQUIRE(map.macro_count() == macros);
        REQUIRE(map.region(Region::Inputs).size == kInputBankBytes);
        REQUIRE(map.content_bytes() <= map.mapped_bytes());
        // only the weight region may be widened, and only for bandwidth
        const WeightLayout layout(cfg.layers);
        const std::size_t need = (layout.total_bytes() + SramMacro::kCapacityBytes - 1) / SramMacro::kCapacityBytes;
        const std::size_t ports = (layout.peak_words_per_cycle() + 1) / 2;
        REQUIRE(map.region(Region::Weights).macro_count == std::max(need, ports));
        for (const RegionExtent &r : map.regions()) {
            if (r.id != Region::Weights) {
                REQUIRE(r.capacity() - r.size < SramMacro::kCapacityBytes);
            }
        }
        REQUIRE(striping_conflict_free(map, WeightLayout(cfg.layers), cfg.layers.size()));
    }
}

TEST_CASE("port arbitration")
{
    MemorySystem mem(build_memory_map(NetworkConfig::canonical()));
    mem.begin_cycle(10);
    // same macro, two ports
    const auto a = mem.access(Region::Inputs, 0);
    const auto b = mem.access(Region::Inputs, 8);
    CHECK(a.macro == b.macro);
    CHECK(a.port != b.port);
    CHECK(a.ready_cycle == 11);
    CHECK(a.ready_cycle - a.issue_cycle == SramMacro::core_latency_cycles());
    CHECK(mem.ports_in_use(a.macro) == 2);
    try {
        mem.access(Region::Inputs, 16);
        FAIL("expected contention");
    } catch (const SimulationFault &f) {
        CHECK(f.kind() == FaultKind::PortContention);
    }
    // next cycle frees the ports
    mem.begin_cycle(11);
    CHECK(mem.ports_in_use(a.macro) == 0);
    CHECK_NOTHROW(mem.access(Region::Inputs, 0, Port::A));
    CHECK_THROWS_AS(mem.access(Region::Inputs, 8, Port::A), SimulationFault);
    CHECK_NOTHROW(mem.access(Region::Inputs, 8, Port::B));
    // a different macro is independent
    CHECK_NOTHROW(mem.access(Region::Inputs, SramMacro::kCapacityBytes));

    try {
        mem.access(Region::Inputs, kInputBankBytes);
        FAIL("expected out of range");
    } catch (const SimulationFault &f) {
        CHECK(f.kind() == FaultKind::AddressOutOfRange);
    }
    CHECK(mem.counters(Region::Inputs).word_reads == 5);
}

TEST_CASE("programming weights and frames")
{
    const std::vector<LayerDims> dims{{1, 8}, {8, 8}, {8, 3}};
    NetworkConfig cfg;
    cfg.layers = dims;
    cfg.params.assign(3, NeuronParams{});
    const WeightLayout layout(dims);
    const WeightStore w = WeightStore::random(dims, 5);
    MemorySystem mem(build_memory_map(cfg));
    program_weights(mem, layout, w);
    const auto bytes = mem.contents(Region::Weights);
    for (std::size_t l = 0; l < dims.size(); ++l) {
        for (std::size_t j = 0; j < dims[l].fan_out; ++j) {
            for (std::size_t i = 0; i < dims[l].fan_in; ++i) {
                const std::size_t s = layout.stream_bit(l, j, i);
                REQUIRE(static_cast<bool>((bytes[s / 8] >> (s % 8)) & 1U) == w.bit(l, j, i));
            }
        }
    }
    SpikeVector frame(8);
    frame.set(3, true);
    program_frame(mem, 2, frame);
    // slots are frame-sized: one byte for an 8-wide input layer
    CHECK(mem.contents(Region::Inputs)[2] == 0x08);
    CHECK_NOTHROW(program_frame(mem, kInputBankBytes - 1, frame));
    CHECK_THROWS_AS(program_frame(mem, kInputBankBytes, frame), ConfigError);
}
