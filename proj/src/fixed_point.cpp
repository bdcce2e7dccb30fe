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

#include "ospk/fixed_point.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace ospk {

QFixed qfixed_from_real(double x)
{
    if (std::isnan(x)) {
        return QFixed::zero();
    }
    const double scaled = x * QFixed::kOne;
    if (scaled >= QFixed::kRawMax) {
        return QFixed::max();
    }
    if (scaled <= QFixed::kRawMin) {
        return QFixed::min();
    }
    // nearbyint honours the default FE_TONEAREST mode: ties go to even.
    return QFixed::saturate(static_cast<int64_t>(std::nearbyint(scaled)));
}

DecayCode DecayCode::from_shifts(std::initializer_list<int> shifts)
{
    DecayCode code;
    for (int k : shifts) {
        if (k < 1 || k > kMaxShift) {
            throw std::invalid_argument("decay shift out of range [1, 8]");
        }
        code.bits = static_cast<uint8_t>(code.bits | (1U << (k - 1)));
    }
    return code;
}

DecayCode DecayCode::from_beta(double beta)
{
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw std::invalid_argument("beta must lie in [0, 1)");
    }
    // beta * 256 truncated; bit (8 - k) of that integer is the 2^-k term.
    const auto scaled = static_cast<unsigned>(beta * 256.0);
    DecayCode code;
    for (int k = 1; k <= kMaxShift; ++k) {
        if ((scaled >> (kMaxShift - k)) & 1U) {
            code.bits = static_cast<uint8_t>(code.bits | (1U << (k - 1)));
        }
    }
    return code;
}

int DecayCode::popcount() const { return std::popcount(bits); }

double DecayCode::beta() const
{
    double b = 0.0;
    for (int k = 1; k <= kMaxShift; ++k) {
        if (has_shift(k)) {
            b += std::ldexp(1.0, -k);
        }
    }
    return b;
}

QFixed decay_shift_add(QFixed u, DecayCode beta)
{
    QFixed acc = QFixed::zero();
    for (int k = 1; k <= DecayCode::kMaxShift; ++k) {
        if (beta.has_shift(k)) {
            // >> on a negative signed value is arithmetic (floor) since C++20.
            acc = sat_add(acc, QFixed::from_raw(static_cast<int16_t>(u.raw() >> k)));
        }
    }
    return acc;
}

} // namespace ospk
