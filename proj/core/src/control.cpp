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

#include "geo_attitude/control.hpp"

#include <cmath>
#include <numbers>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

void ControllerGains::validate() const {
  if (!(k1 > 0.0 && k2 > 0.0)) {
    throw Error(ErrorCode::kValidationError, "controller gains k1 and k2 must be positive");
  }
}

Vector3 nominal_controller(const EmbeddedState& x, const ReferenceState& reference,
                           const RigidBody& body, const ControllerGains& gains) {
  const Matrix3& J = body.inertia();
  const Matrix3 r_err = reference.attitude.matrix().transpose() * x.attitude;
  const Vector3 w_ref_body = r_err.transpose() * reference.angular_velocity;
  const Vector3 w_err = x.omega - w_ref_body;
  const Vector3 feedforward = J * (r_err.transpose() * reference.angular_acceleration) +
                              w_ref_body.cross(J * w_ref_body);
  const Vector3 feedback = -gains.k1 * vee(r_err - r_err.transpose()) -
                           gains.k2 * w_err.array().tanh().matrix();
  return feedforward + feedback;
}

void DisturbanceSpec::validate() const {
  if (!(t_on < t_off)) throw Error(ErrorCode::kValidationError, "disturbance needs t_on < t_off");
  if (!(period > 0.0)) throw Error(ErrorCode::kValidationError, "disturbance period must be positive");
}

Vector3 disturbance(double t, const DisturbanceSpec& spec) {
  if (t < spec.t_on || t > spec.t_off) return Vector3::Zero();
  const double p = (t - spec.t_on) / spec.period;
  const double pi = std::numbers::pi;
  return spec.amplitude *
         Vector3(std::sin(2.0 * pi * p), std::sin(pi * p), -std::sin(pi * p));
}

}  // namespace geo_attitude
