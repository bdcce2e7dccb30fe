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
#include <vector>

#include "json.hpp"

#include "ospk/core.hpp"
#include "ospk/perf.hpp"

namespace ospk {

// JSON field names here are a stable interface; see docs/report-schema.md.

nlohmann::json to_json(const TimingReport &t);
nlohmann::json to_json(const EnergyReport &e);
nlohmann::json to_json(const std::vector<AuditRow> &rows);
nlohmann::json to_json(const CycleReport &r);
/// Counters only; the event stream is exported separately as CSV.
nlohmann::json trace_summary(const CycleTrace &trace);

std::string timing_csv(const TimingReport &t);
std::string energy_csv(const EnergyReport &e);
std::string audit_csv(const std::vector<AuditRow> &rows);

} // namespace ospk
