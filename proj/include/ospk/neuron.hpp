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

#include <string>

#include "ospk/fixed_point.hpp"

namespace ospk {

enum class ResetMode {
    ToZero,       // the MAU zeroes the stored potential of a neuron that spiked
    SubtractHigh, // u_thr_high is subtracted on the step after a spike
};

const char *to_string(ResetMode mode);
ResetMode reset_mode_from_string(const std::string &name);

struct NeuronParams {
    QFixed u_thr_high = QFixed::from_raw(3 * QFixed::kOne / 2);
    QFixed u_thr_low = QFixed::from_raw(5 * QFixed::kOne / 4);
    DecayCode beta = DecayCode::from_shifts({1, 2, 3});
    ResetMode reset_mode = ResetMode::ToZero;

    /// Throws ConfigError unless 0 < u_thr_high and u_thr_low <= u_thr_high.
    void validate() const;

    bool operator==(const NeuronParams &) const = default;
};

struct NeuronState {
    QFixed u;
    bool inhibited = false;

    bool operator==(const NeuronState &) const = default;
};

struct SchmittOutput {
    bool spike = false;
    bool inhibited = false;

    bool operator==(const SchmittOutput &) const = default;
};

/// Dual-threshold spike decision. The spike uses the latch from the previous
/// step; the latch is then updated from the new spike:
///   spike     = u > high && !inhibited_prev
///   inhibited = !( !spike && u < low )
SchmittOutput schmitt_step(QFixed u, bool inhibited_prev, const NeuronParams &params);

/// Leaky integration. Decay, then add the synaptic sum, then apply the reset
/// term for a spike emitted on the previous step (see ResetMode).
/// The inhibition latch is carried through unchanged.
NeuronState membrane_update(const NeuronState &state, QFixed synaptic_sum, bool spiked_prev,
                            const NeuronParams &params);

} // namespace ospk
