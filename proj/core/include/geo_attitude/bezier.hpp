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

#include <array>
#include <cstddef>
#include <vector>

#include "geo_attitude/cells.hpp"
#include "geo_attitude/so3.hpp"

namespace geo_attitude {

/// Ordered control points x_0 ... x_n (n >= 1) of a Bezier curve on SO(3).
class ControlPolygon {
 public:
  /// Throws Error(kValidationError) for fewer than two points and
  /// Error(kAngleAtPi) for an antipodal consecutive pair.
  explicit ControlPolygon(std::vector<Rotation> points);

  std::size_t degree() const { return points_.size() - 1; }
  const std::vector<Rotation>& points() const { return points_; }
  /// V_i = log(x_i^T x_{i+1}), i = 0 .. n-1.
  const std::vector<Vector3>& steps() const { return steps_; }

 private:
  std::vector<Rotation> points_;
  std::vector<Vector3> steps_;
};

/// De Casteljau recursion with geodesic interpolation at every level.
/// Values of tau outside [0, 1] extrapolate along the same geodesics.
Rotation de_casteljau(const ControlPolygon& polygon, double tau);

enum class CurveEnd { kStart, kEnd };

/// Body-frame velocity vee(c^T dc/dtau) at an endpoint: n V_0 or n V_{n-1}.
Vector3 endpoint_velocity(const ControlPolygon& polygon, CurveEnd end);

/// Body-frame acceleration d/dtau vee(c^T dc/dtau) at an endpoint, which is
/// the left-trivialized geometric acceleration D^2c/dtau^2:
///   start: n(n-1) U^-1(V_1 - V_0),         U averages exp(-u ad V_0)
///   end:   n(n-1) U^-1(V_{n-1} - V_{n-2}), U averages exp(+u ad V_{n-1})
/// Zero for n = 1.
Vector3 endpoint_acceleration(const ControlPolygon& polygon, CurveEnd end);

/// Degree-4 curve inside one cell: x_0 and x_4 are the endpoints, x_2 the
/// cell center and x_1, x_3 the geodesic midpoints of (x_0, x_2), (x_2, x_4).
class OneCellCurve {
 public:
  OneCellCurve(const Rotation& x0, const Cell& cell, const Rotation& x4);

  const std::array<Rotation, 5>& control_points() const { return points_; }
  const Cell& cell() const { return cell_; }
  const Rotation& start() const { return points_[0]; }
  const Rotation& end() const { return points_[4]; }

  Rotation evaluate(double tau) const;

  /// Endpoint body velocities 2 log(x0^T x2) and 2 log(x2^T x4).
  Vector3 start_velocity() const { return 4.0 * steps_[0]; }
  Vector3 end_velocity() const { return 4.0 * steps_[3]; }

 private:
  std::array<Rotation, 5> points_;
  std::array<Vector3, 4> steps_;  // log(x_i^T x_{i+1}), cached
  Cell cell_;
};

/// Throws Error(kOutOfCell) unless d(x0, center) < theta and
/// d(x4, center) < theta.
OneCellCurve curve_one_cell(const Rotation& x0, const Cell& cell, const Rotation& x4);

/// Concatenation c : [0, m] -> SO(3) of one-cell curves; segment k covers
/// [k, k + 1] and is joined to its successor at the geodesic midpoint of the
/// two cell centers.
class PiecewiseCurve {
 public:
  explicit PiecewiseCurve(std::vector<OneCellCurve> segments);

  std::size_t segment_count() const { return segments_.size(); }
  double domain_end() const { return static_cast<double>(segments_.size()); }
  const OneCellCurve& segment(std::size_t k) const { return segments_.at(k); }
  const std::vector<OneCellCurve>& segments() const { return segments_; }

  /// tau is clamped to [0, m].
  Rotation evaluate(double tau) const;

 private:
  std::vector<OneCellCurve> segments_;
};

PiecewiseCurve build_multicell(const CellSequence& sequence, const SamplingSet& set);

/// Smooth step: 0 below 0, 1 from 1 on, rho(x) / (rho(x) + rho(1 - x)) in
/// between with rho(x) = exp(-1/x) / x. All derivatives vanish at 0 and 1.
double smoothing_s(double x);

struct ScalarDerivatives {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

ScalarDerivatives smoothing_s_derivatives(double x);

/// Inverse of smoothing_s on [0, 1] by bisection.
double smoothing_s_inverse(double y);

struct ReferenceState {
  Rotation attitude;
  Vector3 angular_velocity = Vector3::Zero();      // body frame
  Vector3 angular_acceleration = Vector3::Zero();  // body frame
};

/// Reference gamma(t) = c(m s(t / T)).
///
/// Angular velocity and acceleration come from Richardson-extrapolated
/// central differences in time (step 1e-4 T), using the symmetric log
/// quotient log(gamma(t-h)^T gamma(t+h)) / 2h for the velocity.
class TimedTrajectory {
 public:
  /// Throws Error(kValidationError) unless settling_time > 0.
  TimedTrajectory(PiecewiseCurve curve, double settling_time);

  const PiecewiseCurve& curve() const { return curve_; }
  double settling_time() const { return settling_time_; }
  std::size_t segment_count() const { return curve_.segment_count(); }

  /// tau(t) = m s(t / T).
  double curve_parameter(double t) const;
  Rotation attitude_at(double t) const;
  ReferenceState evaluate(double t) const;
  /// Times where tau(t) crosses an interior segment junction.
  std::vector<double> junction_times() const;

 private:
  PiecewiseCurve curve_;
  double settling_time_;
};

inline ReferenceState gamma_eval(const TimedTrajectory& trajectory, double t) {
  return trajectory.evaluate(t);
}

/// Center-to-center comparison maneuver: geodesic legs start -> R_1 -> ... ->
/// R_m -> goal, each of equal duration and eased with smoothing_s so the
/// attitude comes to rest at every waypoint.
class StopAndGoTrajectory {
 public:
  StopAndGoTrajectory(std::vector<Rotation> waypoints, double settling_time);

  const std::vector<Rotation>& waypoints() const { return waypoints_; }
  double settling_time() const { return settling_time_; }

  Rotation attitude_at(double t) const;
  ReferenceState evaluate(double t) const;
  /// Times where one leg ends and the next begins.
  std::vector<double> junction_times() const;

 private:
  std::vector<Rotation> waypoints_;
  std::vector<Vector3> legs_;  // log(w_k^T w_{k+1})
  double settling_time_;
};

StopAndGoTrajectory baseline_stop_and_go(const CellSequence& sequence, const SamplingSet& set,
                                         double settling_time);

}  // namespace geo_attitude
