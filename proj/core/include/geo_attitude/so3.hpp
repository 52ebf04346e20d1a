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

#include <Eigen/Dense>

namespace geo_attitude {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

// Below these magnitudes exp/log switch to Taylor expansions.
inline constexpr double kExpTaylorThreshold = 1e-4;
inline constexpr double kLogTaylorThreshold = 1e-4;
// log_so3 refuses rotations with tr(R) < -1 + kAntipodalTolerance.
inline constexpr double kAntipodalTolerance = 1e-6;
inline constexpr double kOrthonormalityTolerance = 1e-9;

/// Skew-symmetric matrix with hat(a) * b == a.cross(b).
Matrix3 hat(const Vector3& v);

/// Inverse of hat; reads the (2,1), (0,2), (1,0) entries.
Vector3 vee(const Matrix3& m);

/// ||M^T M - I||_F.
double orthonormality_residual(const Matrix3& m);

/// An element of SO(3).
///
/// Construction from arbitrary matrices is checked (`from_matrix`) or
/// projected (`nearest`); group operations and the exponential map produce
/// rotations directly.
class Rotation {
 public:
  Rotation() : m_(Matrix3::Identity()) {}

  static Rotation identity() { return Rotation(); }

  /// Throws Error(kValidationError) when `m` is not orthonormal with det +1
  /// within kOrthonormalityTolerance.
  static Rotation from_matrix(const Matrix3& m);

  /// Closest rotation in Frobenius norm (polar factor). Throws
  /// Error(kValidationError) for rank-deficient or reflecting input.
  static Rotation nearest(const Matrix3& m);

  /// Caller guarantees `m` is a rotation; no check.
  static Rotation from_matrix_unchecked(const Matrix3& m) { return Rotation(m); }

  const Matrix3& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  Rotation transpose() const { return Rotation(m_.transpose()); }
  Rotation inverse() const { return transpose(); }

  Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }
  Vector3 operator*(const Vector3& v) const { return m_ * v; }

  double orthonormality_residual() const {
    return geo_attitude::orthonormality_residual(m_);
  }

  friend bool operator==(const Rotation& a, const Rotation& b) { return a.m_ == b.m_; }

 private:
  explicit Rotation(const Matrix3& m) : m_(m) {}

  Matrix3 m_;
};

/// Rodrigues formula.
Rotation exp_so3(const Vector3& v);

/// theta(R) = arccos((tr R - 1) / 2) with the argument clamped to [-1, 1].
double rotation_angle(const Rotation& r);

/// Principal logarithm in vee coordinates, norm in [0, pi). Throws
/// Error(kAngleAtPi) when the rotation angle is within kAntipodalTolerance
/// (on the trace) of pi.
Vector3 log_so3(const Rotation& r);

/// r1 * exp(tau * log(r1^T r2)). Any real tau is accepted; [0, 1] spans the
/// minimizing arc.
Rotation geodesic(const Rotation& r1, const Rotation& r2, double tau);

/// d(r1, r2) = ||log(r1 r2^T)||.
double angular_distance(const Rotation& r1, const Rotation& r2);

/// Chordal identity: ||r1 - r2||_F = 2 sqrt(2) sin(d / 2).
double chordal_distance(const Rotation& r1, const Rotation& r2);

enum class UpsilonDirection {
  kForward,   // W -> int_0^1 exp(u ad V) W du
  kBackward,  // W -> int_0^1 exp(-u ad V) W du
};

/// Linear map on so(3) (in vee coordinates) obtained by averaging the
/// adjoint flow of a base element over u in [0, 1].
///
/// Since ad_V acts as V x (.), exp(u ad V) is the rotation exp_so3(u V) and
/// the average has the closed form
///   I + (1 - cos t) / t^2 [V]x + (t - sin t) / t^3 [V]x^2,   t = ||V||,
/// with V negated for the backward direction. The matrix is singular exactly
/// when ||V|| is a nonzero multiple of 2 pi.
class UpsilonOperator {
 public:
  /// Throws Error(kSingularOperator) when the matrix is numerically singular.
  UpsilonOperator(const Vector3& base, UpsilonDirection direction);

  const Vector3& base() const { return base_; }
  UpsilonDirection direction() const { return direction_; }
  const Matrix3& matrix() const { return matrix_; }

  Vector3 apply(const Vector3& w) const { return matrix_ * w; }
  Vector3 inverse_apply(const Vector3& w) const { return lu_.solve(w); }

 private:
  Vector3 base_;
  UpsilonDirection direction_;
  Matrix3 matrix_;
  Eigen::FullPivLU<Matrix3> lu_;
};

inline Vector3 upsilon_apply(const UpsilonOperator& op, const Vector3& w) {
  return op.apply(w);
}
inline Vector3 upsilon_inverse_apply(const UpsilonOperator& op, const Vector3& w) {
  return op.inverse_apply(w);
}

}  // namespace geo_attitude
