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

#include "geo_attitude/rigid_body.hpp"

#include <sstream>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

EmbeddedState EmbeddedState::from_vector(const StateVector& x) {
  EmbeddedState s;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) s.attitude(r, c) = x(3 * r + c);
  }
  s.omega = x.tail<3>();
  return s;
}

StateVector EmbeddedState::to_vector() const {
  StateVector x;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) x(3 * r + c) = attitude(r, c);
  }
  x.tail<3>() = omega;
  return x;
}

Rotation EmbeddedState::rotation() const {
  const double residual = orthonormality_residual(attitude);
  if (residual > 1e-6 || std::abs(attitude.determinant() - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "state attitude is not a rotation (residual " << residual << ")";
    throw Error(ErrorCode::kValidationError, msg.str());
  }
  return Rotation::from_matrix_unchecked(attitude);
}

RigidBody::RigidBody(const Matrix3& inertia) : inertia_(inertia) {
  if (!inertia.allFinite() || (inertia - inertia.transpose()).norm() >= 1e-12) {
    throw Error(ErrorCode::kValidationError, "inertia matrix must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix3> eig(inertia);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "inertia matrix must be positive definite (min eigenvalue "
        << eig.eigenvalues().minCoeff() << ")";
    throw Error(ErrorCode::kValidationError, msg.str());
  }
  inverse_inertia_ = inertia.inverse();
}

StateVector drift(const EmbeddedState& x, const RigidBody& body) {
  const Matrix3 q_dot = x.attitude * hat(x.omega);
  const Vector3 w_dot = body.inverse_inertia() * (-x.omega.cross(body.inertia() * x.omega));
  EmbeddedState d{q_dot, w_dot};
  return d.to_vector();
}

InputMatrix input_matrix(const RigidBody& body) {
  InputMatrix g = InputMatrix::Zero();
  g.bottomRows<3>() = body.inverse_inertia();
  return g;
}

StateVector dynamics_rhs(const EmbeddedState& x, const Vector3& u, const RigidBody& body) {
  StateVector dx = drift(x, body);
  dx.tail<3>() += body.inverse_inertia() * u;
  return dx;
}

namespace {

template <class Rhs>
EmbeddedState rk4(const EmbeddedState& x, double t, double dt, const Rhs& rhs) {
  const StateVector x0 = x.to_vector();
  const StateVector k1 = rhs(x0, t);
  const StateVector k2 = rhs(x0 + 0.5 * dt * k1, t + 0.5 * dt);
  const StateVector k3 = rhs(x0 + 0.5 * dt * k2, t + 0.5 * dt);
  const StateVector k4 = rhs(x0 + dt * k3, t + dt);
  EmbeddedState next = EmbeddedState::from_vector(x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  next.attitude = Rotation::nearest(next.attitude).matrix();
  return next;
}

}  // namespace

EmbeddedState step(const EmbeddedState& x, const Vector3& u, const RigidBody& body, double dt) {
  return rk4(x, 0.0, dt, [&](const StateVector& v, double) {
    return dynamics_rhs(EmbeddedState::from_vector(v), u, body);
  });
}

EmbeddedState step_feedback(const EmbeddedState& x, double t, const FeedbackLaw& control,
                            const RigidBody& body, double dt) {
  return rk4(x, t, dt, [&](const StateVector& v, double s) {
    const EmbeddedState xs = EmbeddedState::from_vector(v);
    return dynamics_rhs(xs, control(xs, s), body);
  });
}

}  // namespace geo_attitude
