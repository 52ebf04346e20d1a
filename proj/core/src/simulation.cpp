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

#include "geo_attitude/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

namespace {

void validate_setup(const SimulationSetup& setup) {
  setup.gains.validate();
  if (!setup.reference) throw Error(ErrorCode::kValidationError, "simulation has no reference");
  if (!(setup.dt > 0.0)) throw Error(ErrorCode::kValidationError, "run.dt must be positive");
  if (!(setup.t_end >= 0.0)) throw Error(ErrorCode::kValidationError, "run.t_end must be >= 0");
  if (setup.filter_enabled && !setup.barrier) {
    throw Error(ErrorCode::kValidationError, "filter enabled without a barrier block");
  }
  if (setup.barrier) setup.barrier->validate();
  if (setup.disturbance) setup.disturbance->validate();
  if (!setup.initial.attitude.allFinite() || !setup.initial.omega.allFinite() ||
      orthonormality_residual(setup.initial.attitude) > 1e-9) {
    throw Error(ErrorCode::kValidationError, "initial state is not on SO(3) x R^3");
  }
}

}  // namespace

TrajectoryLog simulate(const SimulationSetup& setup) {
  validate_setup(setup);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  if (setup.filter_enabled) {
    const BarrierEval e0 = lie_derivatives(setup.initial, *setup.barrier, setup.body);
    if (!(e0.b > 0.0 && e0.b1 > 0.0)) {
      std::ostringstream msg;
      msg << "initial state has b = " << e0.b << ", b1 = " << e0.b1
          << "; both must be positive (try a larger alpha_gain)";
      throw Error(ErrorCode::kAdmissionFailed, msg.str());
    }
  }

  const auto steps = static_cast<std::size_t>(std::floor(setup.t_end / setup.dt + 1e-9));
  TrajectoryLog log;
  log.dt = setup.dt;
  log.rows.reserve(steps + 1);

  // Feedback at (x, t): the command entering the filter and the applied torque.
  struct Control {
    Vector3 u_add;
    Vector3 u_nom;
    Vector3 u;
    ReferenceState reference;
    std::optional<BarrierEval> eval;
    bool active = false;
  };
  auto control = [&](const EmbeddedState& x, double t) {
    Control c;
    c.reference = setup.reference(t);
    c.u_add = setup.disturbance ? disturbance(t, *setup.disturbance) : Vector3::Zero();
    c.u_nom = nominal_controller(x, c.reference, setup.body, setup.gains) + c.u_add;
    c.u = c.u_nom;
    if (setup.barrier) {
      c.eval = lie_derivatives(x, *setup.barrier, setup.body);
      if (setup.filter_enabled) {
        const FilterResult f = safety_filter(c.u_nom, *c.eval, *setup.barrier);
        c.u = f.u;
        c.active = f.active;
      }
    }
    return c;
  };

  EmbeddedState x = setup.initial;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * setup.dt;
    const Control c = control(x, t);

    LogRow row;
    row.t = t;
    row.attitude = x.attitude;
    row.omega = x.omega;
    row.ref_speed = c.reference.angular_velocity.norm();
    row.track_err = angular_distance(Rotation::from_matrix_unchecked(x.attitude), c.reference.attitude);
    row.u_add = c.u_add;
    row.u_nom = c.u_nom;
    row.u = c.u;
    row.filter_active = c.active;
    if (c.eval) {
      row.h = c.eval->h;
      row.b = c.eval->b;
      row.b1 = c.eval->b1;
    } else {
      row.h = row.b = row.b1 = kNaN;
    }
    log.rows.push_back(row);
    if (k == steps) break;

    // The first RK4 stage is the logged state; reuse its control.
    const FeedbackLaw law = [&](const EmbeddedState& xs, double s) {
      if (s == t && xs.attitude == x.attitude && xs.omega == x.omega) return row.u;
      return control(xs, s).u;
    };
    x = step_feedback(x, t, law, setup.body, setup.dt);
  }
  return log;
}

RunSummary summarize(const TrajectoryLog& log) {
  RunSummary s;
  if (log.rows.empty()) return s;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  s.min_h = s.min_b = s.min_b1 = kInf;
  for (const LogRow& r : log.rows) {
    s.max_ref_speed = std::max(s.max_ref_speed, r.ref_speed);
    s.min_h = std::min(s.min_h, r.h);
    s.min_b = std::min(s.min_b, r.b);
    s.min_b1 = std::min(s.min_b1, r.b1);
    if (r.filter_active) ++s.activation_count;
    s.max_orthonormality_residual =
        std::max(s.max_orthonormality_residual, orthonormality_residual(r.attitude));
  }
  // std::min drops NaN operands, so a run without a barrier would report inf.
  if (std::isnan(log.rows.front().h)) {
    s.min_h = s.min_b = s.min_b1 = std::numeric_limits<double>::quiet_NaN();
  }
  s.terminal_error = log.rows.back().track_err;
  return s;
}

SimulationResult run_simulation(const SimulationSetup& setup) {
  const auto start = std::chrono::steady_clock::now();
  SimulationResult out{simulate(setup), {}};
  out.summary = summarize(out.log);
  out.summary.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace geo_attitude
