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

#include "geo_attitude/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

namespace {

// Runs the recursion given the level-0 points and their cached logs.
template <class Points, class Steps>
Rotation casteljau(const Points& points, const Steps& steps, double tau) {
  const std::size_t n = points.size() - 1;
  std::array<Rotation, 8> small;
  std::vector<Rotation> large;
  Rotation* level = small.data();
  if (n > small.size()) {
    large.resize(n);
    level = large.data();
  }
  for (std::size_t i = 0; i < n; ++i) level[i] = points[i] * exp_so3(tau * steps[i]);
  for (std::size_t width = n; width > 1; --width) {
    for (std::size_t i = 0; i + 1 < width; ++i) level[i] = geodesic(level[i], level[i + 1], tau);
  }
  return level[0];
}

template <class AttitudeAt>
Vector3 symmetric_velocity(const AttitudeAt& attitude_at, double t, double h) {
  auto quotient = [&](double k) {
    return Vector3(log_so3(attitude_at(t - k).transpose() * attitude_at(t + k)) / (2.0 * k));
  };
  return (4.0 * quotient(h / 2.0) - quotient(h)) / 3.0;
}

template <class AttitudeAt>
ReferenceState finite_difference_kinematics(const AttitudeAt& attitude_at, double t, double h) {
  ReferenceState out;
  out.attitude = attitude_at(t);
  out.angular_velocity = symmetric_velocity(attitude_at, t, h);
  auto slope = [&](double k) {
    return Vector3((symmetric_velocity(attitude_at, t + k, h) -
                    symmetric_velocity(attitude_at, t - k, h)) /
                   (2.0 * k));
  };
  out.angular_acceleration = (4.0 * slope(h / 2.0) - slope(h)) / 3.0;
  return out;
}

constexpr double kKinematicsStepFraction = 1e-4;

}  // namespace

ControlPolygon::ControlPolygon(std::vector<Rotation> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(ErrorCode::kValidationError, "control polygon needs at least two points");
  }
  steps_.reserve(points_.size() - 1);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    steps_.push_back(log_so3(points_[i].transpose() * points_[i + 1]));
  }
}

Rotation de_casteljau(const ControlPolygon& polygon, double tau) {
  return casteljau(polygon.points(), polygon.steps(), tau);
}

Vector3 endpoint_velocity(const ControlPolygon& polygon, CurveEnd end) {
  const double n = static_cast<double>(polygon.degree());
  const auto& v = polygon.steps();
  return end == CurveEnd::kStart ? Vector3(n * v.front()) : Vector3(n * v.back());
}

Vector3 endpoint_acceleration(const ControlPolygon& polygon, CurveEnd end) {
  const std::size_t n = polygon.degree();
  if (n < 2) return Vector3::Zero();
  const auto& v = polygon.steps();
  const double scale = static_cast<double>(n * (n - 1));
  if (end == CurveEnd::kStart) {
    const UpsilonOperator op(v[0], UpsilonDirection::kBackward);
    return scale * op.inverse_apply(v[1] - v[0]);
  }
  const UpsilonOperator op(v[n - 1], UpsilonDirection::kForward);
  return scale * op.inverse_apply(v[n - 1] - v[n - 2]);
}

OneCellCurve::OneCellCurve(const Rotation& x0, const Cell& cell, const Rotation& x4)
    : cell_(cell) {
  const Rotation& x2 = cell.center();
  for (const Rotation* endpoint : {&x0, &x4}) {
    const double d = angular_distance(*endpoint, x2);
    if (!(d < cell.radius())) {
      std::ostringstream msg;
      msg << "curve endpoint at distance " << d << " from the cell center exceeds radius "
          << cell.radius();
      throw Error(ErrorCode::kOutOfCell, msg.str());
    }
  }
  points_ = {x0, geodesic(x0, x2, 0.5), x2, geodesic(x2, x4, 0.5), x4};
  for (std::size_t i = 0; i < 4; ++i) {
    steps_[i] = log_so3(points_[i].transpose() * points_[i + 1]);
  }
}

Rotation OneCellCurve::evaluate(double tau) const {
  if (tau == 0.0) return points_[0];
  if (tau == 1.0) return points_[4];
  return casteljau(points_, steps_, tau);
}

OneCellCurve curve_one_cell(const Rotation& x0, const Cell& cell, const Rotation& x4) {
  return OneCellCurve(x0, cell, x4);
}

PiecewiseCurve::PiecewiseCurve(std::vector<OneCellCurve> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw Error(ErrorCode::kValidationError, "piecewise curve needs at least one segment");
  }
  for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
    if (chordal_distance(segments_[k].end(), segments_[k + 1].start()) > 1e-12) {
      throw Error(ErrorCode::kValidationError,
                  "segment " + std::to_string(k) + " does not end where the next one starts");
    }
  }
}

Rotation PiecewiseCurve::evaluate(double tau) const {
  if (tau <= 0.0) return segments_.front().start();
  if (tau >= domain_end()) return segments_.back().end();
  const std::size_t k = std::min(static_cast<std::size_t>(std::floor(tau)), segments_.size() - 1);
  return segments_[k].evaluate(tau - static_cast<double>(k));
}

PiecewiseCurve build_multicell(const CellSequence& sequence, const SamplingSet& set) {
  const std::size_t m = sequence.indices.size();
  if (m == 0) throw Error(ErrorCode::kValidationError, "empty cell sequence");
  std::vector<Rotation> junctions;  // R_{k,k+1}
  for (std::size_t k = 0; k + 1 < m; ++k) {
    junctions.push_back(
        geodesic(set.center(sequence.indices[k]), set.center(sequence.indices[k + 1]), 0.5));
  }
  std::vector<OneCellCurve> segments;
  segments.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Rotation& from = k == 0 ? sequence.start : junctions[k - 1];
    const Rotation& to = k + 1 == m ? sequence.goal : junctions[k];
    segments.emplace_back(from, set.cell(sequence.indices[k]), to);
  }
  return PiecewiseCurve(std::move(segments));
}

ScalarDerivatives smoothing_s_derivatives(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  // s = 1 / (1 + e^g) with g = log(rho(1-x)) - log(rho(x)).
  const double y = 1.0 - x;
  const double g = -std::log(y) - 1.0 / y + std::log(x) + 1.0 / x;
  const double dg = -x / (y * y) - y / (x * x);
  const double d2g = -1.0 / (y * y) - 2.0 * x / (y * y * y) + 1.0 / (x * x) + 2.0 * y / (x * x * x);
  const double value = 1.0 / (1.0 + std::exp(g));
  const double ch = std::cosh(0.5 * g);
  const double spread = 1.0 / (4.0 * ch * ch);  // s (1 - s)
  if (spread == 0.0) return {value, 0.0, 0.0};
  const double first = -spread * dg;
  const double second = -first * (1.0 - 2.0 * value) * dg - spread * d2g;
  return {value, first, second};
}

double smoothing_s(double x) { return smoothing_s_derivatives(x).value; }

double smoothing_s_inverse(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (smoothing_s(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TimedTrajectory::TimedTrajectory(PiecewiseCurve curve, double settling_time)
    : curve_(std::move(curve)), settling_time_(settling_time) {
  if (!(settling_time > 0.0)) {
    throw Error(ErrorCode::kValidationError, "settling time must be positive");
  }
}

double TimedTrajectory::curve_parameter(double t) const {
  return curve_.domain_end() * smoothing_s(t / settling_time_);
}

Rotation TimedTrajectory::attitude_at(double t) const {
  if (t >= settling_time_) return curve_.segments().back().end();
  return curve_.evaluate(curve_parameter(t));
}

ReferenceState TimedTrajectory::evaluate(double t) const {
  if (t >= settling_time_) return {curve_.segments().back().end(), Vector3::Zero(), Vector3::Zero()};
  return finite_difference_kinematics([this](double s) { return attitude_at(s); }, t,
                                      kKinematicsStepFraction * settling_time_);
}

std::vector<double> TimedTrajectory::junction_times() const {
  std::vector<double> out;
  const std::size_t m = curve_.segment_count();
  for (std::size_t i = 1; i < m; ++i) {
    out.push_back(settling_time_ * smoothing_s_inverse(static_cast<double>(i) / m));
  }
  return out;
}

StopAndGoTrajectory::StopAndGoTrajectory(std::vector<Rotation> waypoints, double settling_time)
    : settling_time_(settling_time) {
  if (!(settling_time > 0.0)) {
    throw Error(ErrorCode::kValidationError, "settling time must be positive");
  }
  if (waypoints.empty()) throw Error(ErrorCode::kValidationError, "no waypoints");
  for (const Rotation& w : waypoints) {
    if (!waypoints_.empty() && chordal_distance(waypoints_.back(), w) < 1e-12) continue;
    waypoints_.push_back(w);
  }
  for (std::size_t k = 0; k + 1 < waypoints_.size(); ++k) {
    legs_.push_back(log_so3(waypoints_[k].transpose() * waypoints_[k + 1]));
  }
}

Rotation StopAndGoTrajectory::attitude_at(double t) const {
  if (legs_.empty() || t >= settling_time_) return waypoints_.back();
  if (t <= 0.0) return waypoints_.front();
  const double leg_time = settling_time_ / static_cast<double>(legs_.size());
  const std::size_t k = std::min(static_cast<std::size_t>(t / leg_time), legs_.size() - 1);
  const double u = (t - static_cast<double>(k) * leg_time) / leg_time;
  const double s = smoothing_s(u);
  if (s == 0.0) return waypoints_[k];
  if (s == 1.0) return waypoints_[k + 1];
  return waypoints_[k] * exp_so3(s * legs_[k]);
}

ReferenceState StopAndGoTrajectory::evaluate(double t) const {
  if (t >= settling_time_) return {waypoints_.back(), Vector3::Zero(), Vector3::Zero()};
  return finite_difference_kinematics([this](double s) { return attitude_at(s); }, t,
                                      kKinematicsStepFraction * settling_time_);
}

std::vector<double> StopAndGoTrajectory::junction_times() const {
  std::vector<double> out;
  const double leg_time = settling_time_ / static_cast<double>(std::max<std::size_t>(legs_.size(), 1));
  for (std::size_t k = 1; k < legs_.size(); ++k) out.push_back(static_cast<double>(k) * leg_time);
  return out;
}

StopAndGoTrajectory baseline_stop_and_go(const CellSequence& sequence, const SamplingSet& set,
                                         double settling_time) {
  std::vector<Rotation> waypoints{sequence.start};
  for (std::size_t i : sequence.indices) waypoints.push_back(set.center(i));
  waypoints.push_back(sequence.goal);
  return StopAndGoTrajectory(std::move(waypoints), settling_time);
}

}  // namespace geo_attitude
