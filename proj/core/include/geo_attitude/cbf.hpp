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
#include <cstdint>
#include <span>
#include <vector>

#include "geo_attitude/bezier.hpp"
#include "geo_attitude/cells.hpp"
#include "geo_attitude/rigid_body.hpp"

namespace geo_attitude {

/// Truncation function chi used in b = chi(h / xi): chi(0) = 0, chi(a) = 1
/// for a >= 1, chi' > 0 below 1, and C^2 at the splice point a = 1.
enum class TruncationKind {
  kCubic,    // (a - 1)^3 + 1
  kQuartic,  // 1 - (1 - a)^4
};

ScalarDerivatives truncation(TruncationKind kind, double a);

/// Parameters of the barrier stack over a set of cells.
struct BarrierConfig {
  BarrierConfig(SamplingSet cells, double delta, double xi);

  SamplingSet cells;
  double delta;             // safety margin, > 0
  double xi;                // truncation level, > 0
  double alpha_gain = 1.0;  // alpha(s) = alpha_gain * s
  double beta_gain = 1.0;   // beta(s) = beta_gain * s
  TruncationKind chi = TruncationKind::kCubic;

  /// 4 sin^2(theta / 2): the squared-chordal margin of a cell center.
  double epsilon() const;

  /// Throws Error(kValidationError) on non-positive delta, xi or gains.
  void validate() const;
};

/// r_i(R) = eps - ||R_i - R||_F^2 / 2; positive exactly inside the cell.
/// Defined for any 3x3 matrix so it extends off SO(3).
double cell_margin(const Matrix3& attitude, const Cell& cell);
inline double r_i(const Rotation& r, const Cell& cell) { return cell_margin(r.matrix(), cell); }

/// h(R) = sum_i s(r_i(R) / eps) - delta.
double barrier_h(const Matrix3& attitude, const BarrierConfig& config);
inline double barrier_h(const Rotation& r, const BarrierConfig& config) {
  return barrier_h(r.matrix(), config);
}

/// b(R) = chi(h(R) / xi).
double barrier_b(const Matrix3& attitude, const BarrierConfig& config);
inline double barrier_b(const Rotation& r, const BarrierConfig& config) {
  return barrier_b(r.matrix(), config);
}

/// Barrier values and Lie derivatives along f and g of the embedded dynamics
/// at one state. Row vectors (L_g terms) are stored as Vector3.
struct BarrierEval {
  double h = 0.0;
  double b = 0.0;
  double b1 = 0.0;
  double lf_h = 0.0;
  double lf2_h = 0.0;
  Vector3 lg_h = Vector3::Zero();  // identically zero: h does not depend on w
  Vector3 lglf_h = Vector3::Zero();
  double lf_b = 0.0;
  double lf_b1 = 0.0;
  Vector3 lg_b1 = Vector3::Zero();
  ScalarDerivatives chi;           // chi and its derivatives at h / xi
  std::vector<double> margins;     // r_i per cell
};

/// Analytic derivative chain. With E_i = Q^T R_i and
/// e_i = vee(E_i - E_i^T):
///   L_f h    = (1/eps) sum s'(eta_i) w^T e_i
///   L_gL_f h = (1/eps) sum s'(eta_i) e_i^T J^-1
///   L_f^2 h  = (1/eps) sum [ s''(eta_i) (w^T e_i)^2 / eps
///                            + s'(eta_i) (w'^T e_i + w^T e_i') ]
/// where w' = J^-1(-w x Jw) and E_i' = -[w]x E_i along f; the b and b1 terms
/// follow from the chain rule through chi and alpha.
BarrierEval lie_derivatives(const EmbeddedState& x, const BarrierConfig& config,
                            const RigidBody& body);

/// A state where L_gL_f h vanishes.
struct SingularPoint {
  std::size_t cell_a = 0;
  std::size_t cell_b = 0;  // equals cell_a for a cell center
  double tau = 0.0;        // position on the geodesic from center a to b
  Rotation attitude;
  double h = 0.0;
  double gradient_residual = 0.0;  // ||(1/eps) sum s'(eta_i) e_i||
};

struct XiEstimate {
  double min_h = 0.0;  // smallest h over the sampled singular set
  double xi_hat = 0.0; // 0.99 * min_h
  std::vector<SingularPoint> points;
};

/// Samples the singular set {L_gL_f h = 0} n C_h: every cell center, plus
/// the zeros of L_gL_f h on each geodesic between adjacent centers inside
/// the two-cell intersection. Zeros are bracketed on a grid of
/// `samples_per_geodesic` points and refined by bisection.
///
/// Throws Error(kNonPositive) if the estimate is <= 0.
XiEstimate estimate_xi(const SamplingSet& cells, double delta,
                       std::size_t samples_per_geodesic = 1000);

/// Throws Error(kValidationError) when config.xi exceeds the sampled
/// singular-set minimum of h.
void validate_xi(const BarrierConfig& config);

struct FilterResult {
  Vector3 u = Vector3::Zero();
  double multiplier = 0.0;        // mu
  bool active = false;            // constraint was binding
  double constraint_value = 0.0;  // L_g b1 u + L_f b1 + beta(b1) at the output
};

/// Closed-form minimizer of ||u - u_nom||^2 subject to
/// L_g b1 u + L_f b1 + beta(b1) >= 0.
///
/// Throws Error(kInfeasibleState) if L_g b1 = 0 while the constraint is
/// violated, which cannot happen inside C_b n C_b1.
FilterResult safety_filter(const Vector3& u_nom, const BarrierEval& eval,
                           const BarrierConfig& config);
FilterResult safety_filter(const Vector3& u_nom, const EmbeddedState& x,
                           const BarrierConfig& config, const RigidBody& body);

struct MarginSweepRow {
  double delta = 0.0;
  double retained_fraction = 0.0;
};

/// Monte Carlo fraction of the cell union (Haar-uniform samples) where
/// h >= 0, for each delta.
std::vector<MarginSweepRow> margin_sweep(const SamplingSet& cells, std::span<const double> deltas,
                                         std::size_t samples = 100000, std::uint64_t seed = 0);

}  // namespace geo_attitude
