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

#include <random>
#include <vector>

#include "doctest.h"

#include "ospk/errors.hpp"
#include "ospk/frame.hpp"
#include "ospk/golden.hpp"
#include "ospk/neuron.hpp"

using namespace ospk;

namespace {

QFixed raw(int v) { return QFixed::from_raw(static_cast<int16_t>(v)); }

NeuronParams params(int high, int low, ResetMode mode = ResetMode::ToZero, DecayCode beta = {})
{
    NeuronParams p;
    p.u_thr_high = raw(high);
    p.u_thr_low = raw(low);
    p.reset_mode = mode;
    p.beta = beta;
    return p;
}

} // namespace

TEST_CASE("schmitt truth table")
{
    const NeuronParams p = params(256, 128);
    CHECK(schmitt_step(raw(300), false, p) == SchmittOutput{true, true});
    CHECK(schmitt_step(raw(300), true, p) == SchmittOutput{false, true});
    CHECK(schmitt_step(raw(100), true, p) == SchmittOutput{false, false});
    CHECK(schmitt_step(raw(200), true, p) == SchmittOutput{false, true});
    CHECK(schmitt_step(raw(200), false, p) == SchmittOutput{false, true});
    CHECK(schmitt_step(raw(256), false, p) == SchmittOutput{false, true});
    CHECK(schmitt_step(raw(127), false, p) == SchmittOutput{false, false});
}

TEST_CASE("params validation and reset mode names")
{
    CHECK_NOTHROW(NeuronParams{}.validate());
    CHECK_THROWS_AS(params(0, 0).validate(), ConfigError);
    CHECK_THROWS_AS(params(100, 101).validate(), ConfigError);
    CHECK_NOTHROW(params(100, 100).validate());
    CHECK(reset_mode_from_string("zero") == ResetMode::ToZero);
    CHECK(reset_mode_from_string(to_string(ResetMode::SubtractHigh)) == ResetMode::SubtractHigh);
    CHECK_THROWS_AS(reset_mode_from_string("bogus"), ConfigError);
    CHECK(NeuronState{} == NeuronState{QFixed::zero(), false});
}

TEST_CASE("membrane update")
{
    const NeuronParams half = params(1024, 512, ResetMode::ToZero, DecayCode::from_shifts({1}));
    // 256 * 0.5 + 64
    CHECK(membrane_update({raw(256), false}, raw(64), false, half).u.raw() == 192);
    // zero reset discards the old potential
    CHECK(membrane_update({raw(256), true}, raw(64), true, half).u.raw() == 64);
    NeuronParams sub = half;
    sub.reset_mode = ResetMode::SubtractHigh;
    CHECK(membrane_update({raw(2048), true}, raw(0), true, sub).u.raw() == 1024 - 1024);
    CHECK(membrane_update({raw(256), true}, raw(64), false, sub).inhibited);
}

TEST_CASE("dense layer examples")
{
    WeightStore w(std::vector<LayerDims>{{2, 1}});
    w.fill(true);
    SpikeVector in(2);
    in.set(0, true);
    in.set(1, true);
    LayerState st(1);
    CHECK(dense_layer_forward(in, w, 0, st, params(511, 256)).test(0));
    CHECK(st.neurons[0].u.raw() == 512);
    CHECK(st.neurons[0].inhibited);

    WeightStore neg(std::vector<LayerDims>{{1, 1}});
    SpikeVector one(1);
    one.set(0, true);
    LayerState s2(1);
    CHECK_FALSE(dense_layer_forward(one, neg, 0, s2, params(256, 128)).test(0));
    CHECK(s2.neurons[0].u.raw() == -256);

    LayerState s3(1);
    s3.neurons[0].u = raw(400);
    NeuronParams decay = params(256, 128, ResetMode::ToZero, DecayCode::from_shifts({1}));
    CHECK_FALSE(dense_layer_forward(SpikeVector(2), w, 0, s3, decay).test(0));
    CHECK(s3.neurons[0].u.raw() == 200);

    LayerState wrong(3);
    CHECK_THROWS_AS(dense_layer_forward(in, w, 0, wrong, decay), ConfigError);
    CHECK_THROWS_AS(dense_layer_forward(SpikeVector(3), w, 0, st, decay), ConfigError);
}

TEST_CASE("hysteresis: a spike needs a release below the low threshold since the last spike")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> thr(1, 2000);
    std::uniform_int_distribution<int> step(-3000, 3000);
    for (int trial = 0; trial < 2000; ++trial) {
        const int a = thr(rng), b = thr(rng);
        const NeuronParams p = params(std::max(a, b), std::min(a, b));
        bool inhibited = false;
        bool armed = true; // a release has been seen since the last spike
        int u = 0;
        bool prev_spike = false;
        for (int t = 0; t < 200; ++t) {
            u = std::clamp(u + step(rng), -32768, 32767);
            const SchmittOutput out = schmitt_step(raw(u), inhibited, p);
            if (out.spike) {
                REQUIRE(armed);
                REQUIRE_FALSE(prev_spike);
                armed = false;
            } else if (u < p.u_thr_low.raw()) {
                armed = true;
            }
            REQUIRE(out.inhibited == (out.spike || u >= p.u_thr_low.raw()));
            inhibited = out.inhibited;
            prev_spike = out.spike;
        }
    }
}

TEST_CASE("degenerate band reduces to crossing-threshold LIF")
{
    // With low == high a released neuron fires exactly when u > thr.
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> sum(-700, 700);
    const NeuronParams p = params(256, 256, ResetMode::SubtractHigh);
    for (int trial = 0; trial < 500; ++trial) {
        NeuronState s;
        bool spiked = false;
        int u_plain = 0;
        bool plain_spiked = false;
        bool plain_above = false;
        for (int t = 0; t < 100; ++t) {
            const int x = sum(rng);
            s = membrane_update(s, raw(x), spiked, p);
            const SchmittOutput out = schmitt_step(s.u, s.inhibited, p);
            s.inhibited = out.inhibited;
            spiked = out.spike;

            // plain LIF with beta = 0 and subtract reset, gated by the previous step
            u_plain = x - (plain_spiked ? 256 : 0);
            plain_spiked = u_plain > 256 && !plain_above;
            plain_above = plain_spiked || u_plain >= 256;
            REQUIRE(s.u.raw() == u_plain);
            REQUIRE(spiked == plain_spiked);
        }
    }
    // alternating drive 1.5, 0.5: spikes every other step like plain thresholding
    NeuronState s;
    bool spiked = false;
    std::vector<bool> got;
    for (int x : {384, 128, 384, 128, 384}) {
        s = membrane_update(s, raw(x), spiked, p);
        const SchmittOutput out = schmitt_step(s.u, s.inhibited, p);
        s.inhibited = out.inhibited;
        spiked = out.spike;
        got.push_back(spiked);
    }
    CHECK(got == std::vector<bool>{true, false, true, false, true});
}

TEST_CASE("network forward examples")
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    const WeightStore w = WeightStore::random(cfg.layers, 1);
    const SpikeVector zero(1024);
    CHECK(network_forward(zero, cfg, w, 1) == std::vector<uint32_t>(10, 0));
    CHECK_THROWS_AS(network_forward(zero, cfg, w, 0), ConfigError);
    CHECK_THROWS_AS(network_forward(SpikeVector(1000), cfg, w, 1), ConfigError);

    // all weights +1 and a threshold of one LSB: every hidden neuron fires on the first step
    NeuronParams hot = params(1, 1);
    NetworkConfig hcfg = NetworkConfig::canonical(hot);
    WeightStore ones(hcfg.layers);
    ones.fill(true);
    GoldenNetwork net(hcfg, ones);
    const auto &out = net.step(encode_frame(random_image(9)));
    CHECK(out[1].popcount() == 1024);
    CHECK(out[2].popcount() == 10);
}

TEST_CASE("golden network reset is idempotent and deterministic")
{
    const NetworkConfig cfg = NetworkConfig::canonical();
    const WeightStore w = WeightStore::random(cfg.layers, 4);
    const SpikeVector frame = encode_frame(random_image(4));
    GoldenNetwork a(cfg, w);
    for (int t = 0; t < 5; ++t) {
        a.step(frame);
    }
    const auto counts = a.spike_counts();
    a.reset();
    const auto fresh_layers = a.layers();
    a.reset();
    CHECK(a.layers() == fresh_layers);
    for (int t = 0; t < 5; ++t) {
        a.step(frame);
    }
    CHECK(a.spike_counts() == counts);
    CHECK(network_forward(frame, cfg, w, 5) == counts);
    CHECK(predict_class({1, 4, 4, 2}) == 1);
}
