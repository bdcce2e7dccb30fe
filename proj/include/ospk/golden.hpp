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

#include <cstdint>
#include <vector>

#include "ospk/network.hpp"

namespace ospk {

/// Neuron states of one layer plus the spikes it emitted on the last step.
struct LayerState {
    std::vector<NeuronState> neurons;
    SpikeVector spikes;

    explicit LayerState(std::size_t width = 0) : neurons(width), spikes(width) {}
    bool operator==(const LayerState &) const = default;
};

/// One timestep of a dense layer. x_i is a spike bit, w_ji is +/-1 and the
/// synaptic sum is sum_i x_i * w_ji in units of 1.0 (saturated to Q7.8).
/// Updates `state` in place and returns the emitted spikes.
SpikeVector dense_layer_forward(const SpikeVector &spikes_in, const WeightStore &weights,
                                std::size_t layer, LayerState &state, const NeuronParams &params);

/// Functional reference model. Within a timestep the layers run in order and
/// each consumes the spikes its predecessor emitted in the same timestep.
class GoldenNetwork {
public:
    GoldenNetwork(NetworkConfig config, const WeightStore &weights);

    /// Advances one timestep; returns the spikes of every layer.
    const std::vector<SpikeVector> &step(const SpikeVector &frame);
    void reset();

    const NetworkConfig &config() const { return config_; }
    const std::vector<LayerState> &layers() const { return layers_; }
    const std::vector<uint32_t> &spike_counts() const { return counts_; }

private:
    NetworkConfig config_;
    const WeightStore &weights_;
    std::vector<LayerState> layers_;
    std::vector<SpikeVector> last_;
    std::vector<uint32_t> counts_;
};

/// Runs `timesteps` steps on a static input frame and returns the per-class
/// output spike counts.
std::vector<uint32_t> network_forward(const SpikeVector &frame, const NetworkConfig &config,
                                      const WeightStore &weights, uint32_t timesteps);

/// Argmax of the counts; ties go to the lowest class index.
std::size_t predict_class(const std::vector<uint32_t> &counts);

} // namespace ospk
