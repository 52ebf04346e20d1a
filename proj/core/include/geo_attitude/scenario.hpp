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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "geo_attitude/bezier.hpp"
#include "geo_attitude/cbf.hpp"
#include "geo_attitude/cells.hpp"
#include "geo_attitude/control.hpp"
#include "geo_attitude/simulation.hpp"

namespace geo_attitude {

struct BarrierSettings {
  double delta = 0.1;
  std::optional<double> xi;  // estimated from the singular set when absent
  double alpha_gain = 1.0;
  double beta_gain = 1.0;
  TruncationKind chi = TruncationKind::kCubic;
  bool strict_xi = false;  // reject a xi above the singular-set estimate at load
};

struct RunSettings {
  double dt = 1e-3;
  double t_end = 60.0;
  bool filter = true;
  bool disturbance = false;
  std::optional<int> case_label;  // 1, 2 or 3
};

/// A fully resolved scenario: every rotation is stored as a matrix.
struct Scenario {
  int version = 1;
  std::string description;
  SamplingSet cells;
  Rotation start;
  Rotation goal;
  double settling_time = 40.0;
  Matrix3 inertia = Matrix3::Identity();
  ControllerGains gains;
  std::optional<BarrierSettings> barrier;
  std::optional<DisturbanceSpec> disturbance;
  RunSettings run;
};

/// JSON scenario format (version 1):
///
///   {
///     "version": 1,
///     "units": "rad" | "deg",          // default for every angle, "rad" if absent
///     "cells": {"radius": a, "centers": [rotation, ...]},
///     "start": rotation, "goal": rotation,
///     "settling_time": T,
///     "inertia": [9 numbers, row-major] | [[3], [3], [3]],
///     "gains": {"k1": .., "k2": ..},
///     "barrier": {"delta", "xi", "alpha_gain", "beta_gain",
///                 "chi": "cubic" | "quartic", "strict_xi"},
///     "disturbance": {"amplitude", "t_on", "t_off", "period"},
///     "run": {"dt", "t_end", "filter", "disturbance", "case"}
///   }
///
/// A rotation is one of
///   {"rotvec": [x, y, z]}          axis times angle
///   {"matrix": [9] | [[3],[3],[3]]} projected onto SO(3) if off by > 1e-12
///   {"product": [rotation, ...]}   left-to-right matrix product
///   {"center": k}                  0-based cell center (start and goal only)
/// and may carry its own "units". "run.case" overrides the filter and
/// disturbance flags: 1 = filter only, 2 = disturbance only, 3 = both.
///
/// Throws Error(kParseError) for malformed JSON and Error(kValidationError)
/// naming the offending field path otherwise.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical JSON (radians, matrix rotations); reloading it reproduces the
/// scenario bit for bit.
std::string serialize_scenario(const Scenario& scenario);

/// Sets the run flags for case 1, 2 or 3. Throws Error(kValidationError) for
/// another label, or for cases 2 and 3 without a disturbance block.
void apply_case(Scenario& scenario, int case_label);

/// Barrier parameters with xi resolved (estimated when not given).
BarrierConfig barrier_config(const Scenario& scenario);

CellSequence plan(const Scenario& scenario);
TimedTrajectory reference_trajectory(const Scenario& scenario);
StopAndGoTrajectory baseline_trajectory(const Scenario& scenario);

/// Setup for simulate(): reference from the planned multicell curve, start at
/// rest at scenario.start, barrier and disturbance per the run flags.
SimulationSetup make_simulation(const Scenario& scenario);

}  // namespace geo_attitude
