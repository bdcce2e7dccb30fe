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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace ospk {

/// Signed Q7.8 fixed-point value (1 sign, 7 integer, 8 fraction bits).
/// All arithmetic saturates to [min, max].
class QFixed {
public:
    static constexpr int kFracBits = 8;
    static constexpr int32_t kOne = 1 << kFracBits;
    static constexpr int32_t kRawMax = std::numeric_limits<int16_t>::max();
    static constexpr int32_t kRawMin = std::numeric_limits<int16_t>::min();

    constexpr QFixed() = default;

    static constexpr QFixed from_raw(int16_t raw) { return QFixed(raw); }
    /// Clamps a wide integer into the raw range.
    static constexpr QFixed saturate(int64_t raw)
    {
        if (raw > kRawMax) {
            return QFixed(static_cast<int16_t>(kRawMax));
        }
        if (raw < kRawMin) {
            return QFixed(static_cast<int16_t>(kRawMin));
        }
        return QFixed(static_cast<int16_t>(raw));
    }
    /// Integer count n interpreted as n * 1.0, saturated.
    static constexpr QFixed from_count(int64_t n) { return saturate(n * kOne); }
    static constexpr QFixed min() { return QFixed(static_cast<int16_t>(kRawMin)); }
    static constexpr QFixed max() { return QFixed(static_cast<int16_t>(kRawMax)); }
    static constexpr QFixed zero() { return QFixed(); }

    constexpr int16_t raw() const { return raw_; }
    double to_real() const { return static_cast<double>(raw_) / kOne; }

    constexpr auto operator<=>(const QFixed &) const = default;

private:
    constexpr explicit QFixed(int16_t raw) : raw_(raw) {}

    int16_t raw_ = 0;
};

/// Round-to-nearest-even conversion; saturates outside the representable range.
/// NaN maps to zero.
QFixed qfixed_from_real(double x);

constexpr QFixed sat_add(QFixed a, QFixed b)
{
    return QFixed::saturate(int32_t{a.raw()} + int32_t{b.raw()});
}

constexpr QFixed sat_sub(QFixed a, QFixed b)
{
    return QFixed::saturate(int32_t{a.raw()} - int32_t{b.raw()});
}

/// Negation of min saturates to max.
constexpr QFixed sat_neg(QFixed a) { return QFixed::saturate(-int32_t{a.raw()}); }

/// Decay factor encoded as a sum of powers of two. Bit k (1..8) of the code
/// selects the term u >> k; it is stored at bit position k - 1 of `bits`.
struct DecayCode {
    uint8_t bits = 0;

    static constexpr int kMaxShift = 8;

    /// Builds a code from the list of shift amounts, each in [1, 8].
    static DecayCode from_shifts(std::initializer_list<int> shifts);
    /// Nearest representable code not above beta, for beta in [0, 1).
    static DecayCode from_beta(double beta);

    constexpr bool has_shift(int k) const { return (bits >> (k - 1)) & 1U; }
    int popcount() const;
    /// The encoded beta = sum over set k of 2^-k.
    double beta() const;

    constexpr auto operator<=>(const DecayCode &) const = default;
};

/// Hardware-exact beta * u: arithmetic right shifts summed in ascending shift
/// order, saturating at each step.
QFixed decay_shift_add(QFixed u, DecayCode beta);

} // namespace ospk
