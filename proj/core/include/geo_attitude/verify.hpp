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
#include <cstdint>
#include <string>
#include <vector>

#include "geo_attitude/scenario.hpp"

namespace geo_attitude {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;  // random states / curves per suite
};

/// Runtime self-checks on a scenario:
///   endpoint-kinematics  curve endpoint velocity and acceleration vs finite differences
///   containment          reference curve stays inside its cells
///   lie-derivatives      barrier derivative chain vs finite differences
///   singular-set         residual of L_gL_f h at sampled singular points,
///                        configured xi against the singular-set minimum of h
///   safety-filter        closed-form filter vs halfspace projection
/// Barrier suites are skipped (and reported as passed) without a barrier block.
std::vector<CheckResult> run_verification(const Scenario& scenario, const VerifyOptions& options = {});

}  // namespace geo_attitude
