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

#include "geo_attitude/bezier.hpp"
#include "geo_attitude/rigid_body.hpp"

namespace geo_attitude {

struct ControllerGains {
  double k1 = 0.2;  // attitude error
  double k2 = 0.2;  // saturated angular-velocity error

  /// Throws Error(kValidationError) unless both gains are positive.
  void validate() const;
};

/// Saturated tracking law
///   u = J Rt^T wr' + [Rt^T wr]x J Rt^T wr - k1 (Rt - Rt^T)^v - k2 tanh(we)
/// with Rt = Rr^T R, we = w - Rt^T wr and tanh taken elementwise.
Vector3 nominal_controller(const EmbeddedState& x, const ReferenceState& reference,
                           const RigidBody& body, const ControllerGains& gains);

/// Additive test torque active on [t_on, t_off]:
///   amplitude * (sin(2 pi p), sin(pi p), -sin(pi p)),  p = (t - t_on) / period
struct DisturbanceSpec {
  double amplitude = 0.3;
  double t_on = 20.0;
  double t_off = 25.0;
  double period = 5.0;

  /// Throws Error(kValidationError) unless t_on < t_off and period > 0.
  void validate() const;
};

Vector3 disturbance(double t, const DisturbanceSpec& spec);

}  // namespace geo_attitude
