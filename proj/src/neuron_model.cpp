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
#include <string>

#include "ospk/errors.hpp"
#include "ospk/golden.hpp"
#include "ospk/neuron.hpp"

namespace ospk {

const char *to_string(ResetMode mode)
{
    switch (mode) {
    case ResetMode::ToZero:
        return "zero";
    case ResetMode::SubtractHigh:
        return "subtract";
    }
    return "?";
}

ResetMode reset_mode_from_string(const std::string &name)
{
    if (name == "zero") {
        return ResetMode::ToZero;
    }
    if (name == "subtract") {
        return ResetMode::SubtractHigh;
    }
    throw ConfigError("unknown reset mode '" + name + "' (expected zero or subtract)");
}

void NeuronParams::validate() const
{
    if (u_thr_high <= QFixed::zero()) {
        throw ConfigError("u_thr_high must be positive");
    }
    if (u_thr_low > u_thr_high) {
        throw ConfigError("u_thr_low must not exceed u_thr_high");
    }
}

SchmittOutput schmitt_step(QFixed u, bool inhibited_prev, const NeuronParams &params)
{
    SchmittOutput out;
    out.spike = u > params.u_thr_high && !inhibited_prev;
    out.inhibited = !(!out.spike && u < params.u_thr_low);
    return out;
}

NeuronState membrane_update(const NeuronState &state, QFixed synaptic_sum, bool spiked_prev,
                            const NeuronParams &params)
{
    const bool zero_reset = spiked_prev && params.reset_mode == ResetMode::ToZero;
    const QFixed decayed = decay_shift_add(zero_reset ? QFixed::zero() : state.u, params.beta);
    QFixed u = sat_add(decayed, synaptic_sum);
    if (spiked_prev && params.reset_mode == ResetMode::SubtractHigh) {
        u = sat_sub(u, params.u_thr_high);
    }
    return {u, state.inhibited};
}

SpikeVector dense_layer_forward(const SpikeVector &spikes_in, const WeightStore &weights,
                                std::size_t layer, LayerState &state, const NeuronParams &params)
{
    if (layer >= weights.layer_count()) {
        throw ConfigError("layer index " + std::to_string(layer) + " out of range");
    }
    const LayerDims dims = weights.dims()[layer];
    if (spikes_in.size() != dims.fan_in) {
        throw ConfigError("layer " + std::to_string(layer) + " expects " +
                          std::to_string(dims.fan_in) + " inputs, got " +
                          std::to_string(spikes_in.size()));
    }
    if (state.neurons.size() != dims.fan_out || state.spikes.size() != dims.fan_out) {
        throw ConfigError("layer " + std::to_string(layer) + " state has wrong width");
    }

    std::vector<uint32_t> active;
    for (std::size_t i = 0; i < dims.fan_in; ++i) {
        if (spikes_in.test(i)) {
            active.push_back(static_cast<uint32_t>(i));
        }
    }

    SpikeVector out(dims.fan_out);
    for (std::size_t j = 0; j < dims.fan_out; ++j) {
        int64_t sum = 0;
        for (uint32_t i : active) {
            sum += weights.weight(layer, j, i);
        }
        NeuronState next = membrane_update(state.neurons[j], QFixed::from_count(sum),
                                           state.spikes.test(j), params);
        const SchmittOutput s = schmitt_step(next.u, next.inhibited, params);
        next.inhibited = s.inhibited;
        state.neurons[j] = next;
        out.set(j, s.spike);
    }
    state.spikes = out;
    return out;
}

GoldenNetwork::GoldenNetwork(NetworkConfig config, const WeightStore &weights)
    : config_(std::move(config)), weights_(weights)
{
    config_.validate();
    if (weights_.dims() != config_.layers) {
        throw ConfigError("weight store dimensions do not match the network config");
    }
    reset();
}

void GoldenNetwork::reset()
{
    layers_.clear();
    for (const auto &l : config_.layers) {
        layers_.emplace_back(l.fan_out);
    }
    last_.assign(config_.layers.size(), SpikeVector());
    counts_.assign(config_.output_width(), 0);
}

const std::vector<SpikeVector> &GoldenNetwork::step(const SpikeVector &frame)
{
    if (frame.size() != config_.input_width()) {
        throw ConfigError("input frame has " + std::to_string(frame.size()) + " pixels, expected " +
                          std::to_string(config_.input_width()));
    }
    for (std::size_t l = 0; l < config_.layers.size(); ++l) {
        // The input layer's neuron j sees only pixel j through its single weight.
        if (l == 0) {
            const LayerDims d = config_.layers[0];
            const NeuronParams &p = config_.params[0];
            SpikeVector out(d.fan_out);
            LayerState &st = layers_[0];
            for (std::size_t j = 0; j < d.fan_out; ++j) {
                const int64_t sum = frame.test(j) ? weights_.weight(0, j, 0) : 0;
                NeuronState next =
                    membrane_update(st.neurons[j], QFixed::from_count(sum), st.spikes.test(j), p);
                const SchmittOutput s = schmitt_step(next.u, next.inhibited, p);
                next.inhibited = s.inhibited;
                st.neurons[j] = next;
                out.set(j, s.spike);
            }
            st.spikes = out;
            last_[0] = std::move(out);
        } else {
            last_[l] = dense_layer_forward(last_[l - 1], weights_, l, layers_[l], config_.params[l]);
        }
    }
    const SpikeVector &out = last_.back();
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        counts_[k] += out.test(k) ? 1U : 0U;
    }
    return last_;
}

std::vector<uint32_t> network_forward(const SpikeVector &frame, const NetworkConfig &config,
                                      const WeightStore &weights, uint32_t timesteps)
{
    if (timesteps == 0) {
        throw ConfigError("timestep count must be at least 1");
    }
    GoldenNetwork net(config, weights);
    for (uint32_t t = 0; t < timesteps; ++t) {
        net.step(frame);
    }
    return net.spike_counts();
}

std::size_t predict_class(const std::vector<uint32_t> &counts)
{
    if (counts.empty()) {
        return 0;
    }
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

} // namespace ospk
