// Copyright 2026 The geo-attitude Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

#include "geo_attitude/cbf.hpp"
#include "geo_attitude/simulation.hpp"

namespace geo_attitude {

/// Header: t,r11,...,r33,w1,w2,w3,unom1,unom2,unom3,u1,u2,u3,h,b,b1,track_err.
/// Writes every `every`-th row (the first row always).
void write_log_csv(std::ostream& out, const TrajectoryLog& log, std::size_t every = 1);

struct ReferenceSample {
  double t = 0.0;
  ReferenceState state;
};

/// Header: t,r11,...,r33,w1,w2,w3,dw1,dw2,dw3,speed.
void write_reference_csv(std::ostream& out, std::span<const ReferenceSample> samples);

/// Single JSON object with the summary fields, plus `case` when given.
std::string summary_json(const RunSummary& summary, int case_label = 0);

/// Header: delta,retained_fraction.
void write_margin_sweep_csv(std::ostream& out, std::span<const MarginSweepRow> rows);

}  // namespace geo_attitude
