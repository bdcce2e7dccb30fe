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

#include <stdexcept>
#include <string>

namespace ospk {

/// Invalid network shape, parameters or run settings.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File-system failure; the message names the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
    BadMagic,
    UnsupportedVersion,
    TruncatedHeader,
    TruncatedPayload,
    DimensionOverflow,
    TrailingBytes,
    BadImage,
};

const char *to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }
    ParseErrorKind kind() const noexcept { return kind_; }

private:
    ParseErrorKind kind_;
};

enum class FaultKind {
    PortContention,
    AddressOutOfRange,
    Livelock,
};

const char *to_string(FaultKind kind);

/// Raised when the cycle model detects a violated hardware contract.
class SimulationFault : public std::runtime_error {
public:
    SimulationFault(FaultKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }
    FaultKind kind() const noexcept { return kind_; }

private:
    FaultKind kind_;
};

} // namespace ospk
