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
#include <functional>
#include <optional>
#include <vector>

#include "geo_attitude/cbf.hpp"
#include "geo_attitude/control.hpp"

namespace geo_attitude {

using ReferenceFunction = std::function<ReferenceState(double)>;

struct SimulationSetup {
  RigidBody body;
  ControllerGains gains;
  ReferenceFunction reference;
  EmbeddedState initial;
  std::optional<BarrierConfig> barrier;  // barrier values are logged when set
  std::optional<DisturbanceSpec> disturbance;
  bool filter_enabled = true;  // requires a barrier
  double dt = 1e-3;
  double t_end = 60.0;
};

struct LogRow {
  double t = 0.0;
  Matrix3 attitude = Matrix3::Identity();
  Vector3 omega = Vector3::Zero();
  Vector3 u_nom = Vector3::Zero();  // command entering the filter, disturbance included
  Vector3 u_add = Vector3::Zero();  // disturbance part of u_nom
  Vector3 u = Vector3::Zero();      // applied torque
  double h = 0.0;                   // NaN when no barrier is configured
  double b = 0.0;
  double b1 = 0.0;
  double track_err = 0.0;  // d(R, R_r)
  bool filter_active = false;
  double ref_speed = 0.0;  // ||w_r||
};

/// Rows at t_k = k dt for k = 0 .. floor(t_end / dt). The last row carries the
/// control that would be applied at that instant.
struct TrajectoryLog {
  double dt = 0.0;
  std::vector<LogRow> rows;
};

struct RunSummary {
  double max_ref_speed = 0.0;
  double min_h = 0.0;
  double min_b = 0.0;
  double min_b1 = 0.0;
  double terminal_error = 0.0;  // track_err of the final row
  std::size_t activation_count = 0;
  double max_orthonormality_residual = 0.0;
  double wall_time = 0.0;  // seconds
};

/// Closed-loop run. The feedback evaluates the reference, the nominal law,
/// adds the disturbance and applies the safety filter when enabled; the state
/// advances by RK4 on the closed loop with the feedback re-evaluated at every
/// stage, so the filter acts as a continuous state feedback rather than a
/// sample-and-hold command.
///
/// Throws Error(kAdmissionFailed) when the filter is enabled and the initial
/// state has b <= 0 or b1 <= 0, Error(kValidationError) for an invalid setup,
/// and propagates Error(kInfeasibleState) from the filter.
TrajectoryLog simulate(const SimulationSetup& setup);

/// Summary statistics; wall_time is left at zero.
RunSummary summarize(const TrajectoryLog& log);

struct SimulationResult {
  TrajectoryLog log;
  RunSummary summary;
};

/// simulate() followed by summarize(), with the wall time filled in.
SimulationResult run_simulation(const SimulationSetup& setup);

}  // namespace geo_attitude
