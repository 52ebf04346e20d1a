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

#include "geo_attitude/so3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

Matrix3 hat(const Vector3& v) {
  Matrix3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vector3 vee(const Matrix3& m) { return Vector3(m(2, 1), m(0, 2), m(1, 0)); }

double orthonormality_residual(const Matrix3& m) {
  return (m.transpose() * m - Matrix3::Identity()).norm();
}

Rotation Rotation::from_matrix(const Matrix3& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kValidationError, "rotation matrix has non-finite entries");
  }
  const double residual = geo_attitude::orthonormality_residual(m);
  const double det = m.determinant();
  if (residual > kOrthonormalityTolerance || std::abs(det - 1.0) > kOrthonormalityTolerance) {
    std::ostringstream msg;
    msg << "matrix is not a rotation (||R^T R - I||_F = " << residual << ", det = " << det << ")";
    throw Error(ErrorCode::kValidationError, msg.str());
  }
  return Rotation(m);
}

Rotation Rotation::nearest(const Matrix3& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kValidationError, "rotation matrix has non-finite entries");
  }
  Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector3 sigma = svd.singularValues();
  if (sigma(2) <= 1e-12 * std::max(1.0, sigma(0))) {
    throw Error(ErrorCode::kValidationError, "matrix is rank deficient; no nearest rotation");
  }
  Matrix3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    throw Error(ErrorCode::kValidationError, "matrix is a reflection, not a rotation");
  }
  return Rotation(r);
}

Rotation exp_so3(const Vector3& v) {
  const double theta = v.norm();
  const Matrix3 k = hat(v);
  double a;
  double b;
  if (theta < kExpTaylorThreshold) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Rotation::from_matrix_unchecked(Matrix3::Identity() + a * k + b * k * k);
}

double rotation_angle(const Rotation& r) {
  const double c = std::clamp((r.matrix().trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Vector3 log_so3(const Rotation& r) {
  const Matrix3& m = r.matrix();
  const double trace = m.trace();
  if (trace < -1.0 + kAntipodalTolerance) {
    std::ostringstream msg;
    msg << "rotation angle too close to pi (trace = " << trace << ")";
    throw Error(ErrorCode::kAngleAtPi, msg.str());
  }
  const double theta = rotation_angle(r);
  double factor;
  if (theta < kLogTaylorThreshold) {
    factor = 0.5 * (1.0 + theta * theta / 6.0);
  } else {
    factor = theta / (2.0 * std::sin(theta));
  }
  return factor * vee(m - m.transpose());
}

Rotation geodesic(const Rotation& r1, const Rotation& r2, double tau) {
  return r1 * exp_so3(tau * log_so3(r1.transpose() * r2));
}

double angular_distance(const Rotation& r1, const Rotation& r2) {
  return log_so3(r1 * r2.transpose()).norm();
}

double chordal_distance(const Rotation& r1, const Rotation& r2) {
  return (r1.matrix() - r2.matrix()).norm();
}

UpsilonOperator::UpsilonOperator(const Vector3& base, UpsilonDirection direction)
    : base_(base), direction_(direction) {
  const Vector3 v = direction == UpsilonDirection::kForward ? base : Vector3(-base);
  const double t = v.norm();
  double a;
  double b;
  if (t < kExpTaylorThreshold) {
    const double t2 = t * t;
    a = 0.5 - t2 / 24.0;
    b = 1.0 / 6.0 - t2 / 120.0;
  } else {
    a = (1.0 - std::cos(t)) / (t * t);
    b = (t - std::sin(t)) / (t * t * t);
  }
  const Matrix3 k = hat(v);
  matrix_ = Matrix3::Identity() + a * k + b * k * k;
  lu_.compute(matrix_);
  // The matrix is a function of a skew matrix, hence normal: its singular
  // values are 1 along v and 2|sin(t/2)|/t on the orthogonal plane.
  const double sigma_min = t < kExpTaylorThreshold ? 1.0 : 2.0 * std::abs(std::sin(0.5 * t)) / t;
  if (sigma_min < 1e-10) {
    std::ostringstream msg;
    msg << "Upsilon operator is singular for |base| = " << t;
    throw Error(ErrorCode::kSingularOperator, msg.str());
  }
}

}  // namespace geo_attitude
