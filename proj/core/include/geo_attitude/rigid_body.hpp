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

#include <functional>

#include <Eigen/Dense>

#include "geo_attitude/so3.hpp"

namespace geo_attitude {

using StateVector = Eigen::Matrix<double, 12, 1>;
using InputMatrix = Eigen::Matrix<double, 12, 3>;

/// Embedded state x = (q, w): q stacks the attitude matrix row-major
/// (r11, r12, ..., r33), w is the body angular velocity in rad/s.
///
/// The attitude is kept as a plain matrix so barrier functions and their
/// derivatives can be evaluated slightly off SO(3), as finite-difference
/// checks on the 12-dimensional system require.
struct EmbeddedState {
  Matrix3 attitude = Matrix3::Identity();
  Vector3 omega = Vector3::Zero();

  static EmbeddedState from(const Rotation& r, const Vector3& omega) {
    return {r.matrix(), omega};
  }
  static EmbeddedState from_vector(const StateVector& x);
  StateVector to_vector() const;

  /// Checked view of the attitude; throws Error(kValidationError) when the
  /// orthonormality residual exceeds 1e-6.
  Rotation rotation() const;
};

/// Rigid body with constant inertia J (kg m^2).
class RigidBody {
 public:
  /// Throws Error(kValidationError) unless J is symmetric (residual < 1e-12)
  /// and positive definite.
  explicit RigidBody(const Matrix3& inertia);

  const Matrix3& inertia() const { return inertia_; }
  const Matrix3& inverse_inertia() const { return inverse_inertia_; }

 private:
  Matrix3 inertia_;
  Matrix3 inverse_inertia_;
};

/// Drift f(x): q' = Q [w]x, w' = J^-1(-w x Jw).
StateVector drift(const EmbeddedState& x, const RigidBody& body);

/// Input matrix g = [0_{9x3}; J^-1].
InputMatrix input_matrix(const RigidBody& body);

/// x' = f(x) + g u.
StateVector dynamics_rhs(const EmbeddedState& x, const Vector3& u, const RigidBody& body);

/// One classical RK4 step of the embedded system with the input held
/// constant, followed by projection of the attitude block onto SO(3).
EmbeddedState step(const EmbeddedState& x, const Vector3& u, const RigidBody& body, double dt);

/// State feedback u = k(x, t).
using FeedbackLaw = std::function<Vector3(const EmbeddedState&, double)>;

/// One RK4 step of the closed loop x' = f(x) + g k(x, t), with the feedback
/// re-evaluated at every stage, followed by the same projection.
EmbeddedState step_feedback(const EmbeddedState& x, double t, const FeedbackLaw& control,
                            const RigidBody& body, double dt);

}  // namespace geo_attitude
