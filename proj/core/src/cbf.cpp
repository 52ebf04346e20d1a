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

#include "geo_attitude/cbf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

namespace {

double epsilon_for(double radius) {
  const double s = std::sin(radius / 2.0);
  return 4.0 * s * s;
}

double margin(const Matrix3& attitude, const Matrix3& center, double eps) {
  return eps - 0.5 * (center - attitude).squaredNorm();
}

// e = vee(E - E^T) with E = Q^T R_i.
Vector3 alignment(const Matrix3& attitude, const Matrix3& center) {
  const Matrix3 e = attitude.transpose() * center;
  return vee(e - e.transpose());
}

double smoothed_sum(const Matrix3& attitude, const SamplingSet& cells) {
  const double eps = epsilon_for(cells.radius());
  double sum = 0.0;
  for (const Rotation& c : cells.centers()) {
    sum += smoothing_s(margin(attitude, c.matrix(), eps) / eps);
  }
  return sum;
}

// (1/eps) sum s'(eta_i) e_i, i.e. L_gL_f h before the J^-1 factor.
Vector3 singular_gradient(const Matrix3& attitude, const SamplingSet& cells) {
  const double eps = epsilon_for(cells.radius());
  Vector3 g = Vector3::Zero();
  for (const Rotation& c : cells.centers()) {
    const double slope = smoothing_s_derivatives(margin(attitude, c.matrix(), eps) / eps).first;
    if (slope != 0.0) g += slope * alignment(attitude, c.matrix());
  }
  return g / eps;
}

}  // namespace

ScalarDerivatives truncation(TruncationKind kind, double a) {
  if (a >= 1.0) return {1.0, 0.0, 0.0};
  switch (kind) {
    case TruncationKind::kCubic: {
      const double d = a - 1.0;
      return {d * d * d + 1.0, 3.0 * d * d, 6.0 * d};
    }
    case TruncationKind::kQuartic: {
      const double d = 1.0 - a;
      return {1.0 - d * d * d * d, 4.0 * d * d * d, -12.0 * d * d};
    }
  }
  return {};
}

BarrierConfig::BarrierConfig(SamplingSet cells_in, double delta_in, double xi_in)
    : cells(std::move(cells_in)), delta(delta_in), xi(xi_in) {}

double BarrierConfig::epsilon() const { return epsilon_for(cells.radius()); }

void BarrierConfig::validate() const {
  if (!(delta > 0.0)) throw Error(ErrorCode::kValidationError, "barrier delta must be positive");
  if (!(xi > 0.0)) throw Error(ErrorCode::kValidationError, "barrier xi must be positive");
  if (!(alpha_gain > 0.0 && beta_gain > 0.0)) {
    throw Error(ErrorCode::kValidationError, "alpha and beta gains must be positive");
  }
}

double cell_margin(const Matrix3& attitude, const Cell& cell) {
  return margin(attitude, cell.center().matrix(), epsilon_for(cell.radius()));
}

double barrier_h(const Matrix3& attitude, const BarrierConfig& config) {
  return smoothed_sum(attitude, config.cells) - config.delta;
}

double barrier_b(const Matrix3& attitude, const BarrierConfig& config) {
  return truncation(config.chi, barrier_h(attitude, config) / config.xi).value;
}

BarrierEval lie_derivatives(const EmbeddedState& x, const BarrierConfig& config,
                            const RigidBody& body) {
  const double eps = config.epsilon();
  const Matrix3& q = x.attitude;
  const Vector3& w = x.omega;
  const Vector3 w_dot = body.inverse_inertia() * (-w.cross(body.inertia() * w));
  const Matrix3 w_hat = hat(w);

  BarrierEval out;
  out.margins.reserve(config.cells.size());
  double sum_s = 0.0;
  Vector3 gradient = Vector3::Zero();  // sum s' e_i
  for (const Rotation& c : config.cells.centers()) {
    const double r = margin(q, c.matrix(), eps);
    out.margins.push_back(r);
    const ScalarDerivatives s = smoothing_s_derivatives(r / eps);
    sum_s += s.value;
    if (s.first == 0.0 && s.second == 0.0) continue;
    const Matrix3 e_mat = q.transpose() * c.matrix();
    const Vector3 e = vee(e_mat - e_mat.transpose());
    const Matrix3 e_mat_dot = -w_hat * e_mat;
    const Vector3 e_dot = vee(e_mat_dot - e_mat_dot.transpose());
    const double we = w.dot(e);
    out.lf_h += s.first * we;
    gradient += s.first * e;
    out.lf2_h += s.second * we * we / eps + s.first * (w_dot.dot(e) + w.dot(e_dot));
  }
  out.h = sum_s - config.delta;
  out.lf_h /= eps;
  out.lf2_h /= eps;
  out.lglf_h = body.inverse_inertia().transpose() * gradient / eps;

  const double xi = config.xi;
  out.chi = truncation(config.chi, out.h / xi);
  out.b = out.chi.value;
  out.lf_b = out.chi.first * out.lf_h / xi;
  out.b1 = out.lf_b + config.alpha_gain * out.b;
  out.lf_b1 = (out.chi.second * out.lf_h * out.lf_h / xi + out.chi.first * out.lf2_h) / xi +
              config.alpha_gain * out.lf_b;
  out.lg_b1 = out.chi.first / xi * out.lglf_h;
  return out;
}

XiEstimate estimate_xi(const SamplingSet& cells, double delta, std::size_t samples_per_geodesic) {
  XiEstimate est;
  const double eps = epsilon_for(cells.radius());
  auto h_at = [&](const Matrix3& a) { return smoothed_sum(a, cells) - delta; };

  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Matrix3& c = cells.center(i).matrix();
    est.points.push_back(SingularPoint{i, i, 0.0, cells.center(i), h_at(c),
                                       singular_gradient(c, cells).norm()});
  }

  const CellGraph graph(cells);
  const std::size_t k_max = std::max<std::size_t>(samples_per_geodesic, 2);
  for (const auto& [i, j] : graph.edges()) {
    const Rotation& ci = cells.center(i);
    const Rotation& cj = cells.center(j);
    const Vector3 v = log_so3(ci.transpose() * cj);
    const Vector3 axis = v.normalized();
    auto attitude = [&](double tau) { return ci * exp_so3(tau * v); };
    auto inside_both = [&](const Rotation& r) {
      return margin(r.matrix(), ci.matrix(), eps) > 0.0 && margin(r.matrix(), cj.matrix(), eps) > 0.0;
    };
    auto axial = [&](double tau) { return axis.dot(singular_gradient(attitude(tau).matrix(), cells)); };

    auto record = [&](double tau) {
      const Rotation r = attitude(tau);
      const double h = h_at(r.matrix());
      est.points.push_back(
          SingularPoint{i, j, tau, r, h, singular_gradient(r.matrix(), cells).norm()});
    };

    double prev_tau = 0.0;
    double prev_val = 0.0;
    bool have_prev = false;
    for (std::size_t k = 0; k <= k_max; ++k) {
      const double tau = static_cast<double>(k) / static_cast<double>(k_max);
      if (!inside_both(attitude(tau))) {
        have_prev = false;
        continue;
      }
      const double val = axial(tau);
      if (val == 0.0) {
        record(tau);
      } else if (have_prev && prev_val != 0.0 && (prev_val < 0.0) != (val < 0.0)) {
        double lo = prev_tau;
        double hi = tau;
        const bool lo_negative = prev_val < 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double f = axial(mid);
          if (f == 0.0) {
            lo = hi = mid;
            break;
          }
          ((f < 0.0) == lo_negative ? lo : hi) = mid;
        }
        record(0.5 * (lo + hi));
      }
      prev_tau = tau;
      prev_val = val;
      have_prev = true;
    }
  }

  // The singular set lives in C_h; zeros of L_gL_f h with h < 0 are not in it.
  std::erase_if(est.points, [](const SingularPoint& p) { return p.h < 0.0; });
  if (est.points.empty()) {
    throw Error(ErrorCode::kNonPositive,
                "no singular point has h >= 0; delta is too large for this geometry");
  }
  est.min_h = std::numeric_limits<double>::infinity();
  for (const SingularPoint& p : est.points) est.min_h = std::min(est.min_h, p.h);
  est.xi_hat = 0.99 * est.min_h;
  if (!(est.xi_hat > 0.0)) {
    std::ostringstream msg;
    msg << "singular-set estimate of xi is " << est.xi_hat;
    throw Error(ErrorCode::kNonPositive, msg.str());
  }
  return est;
}

void validate_xi(const BarrierConfig& config) {
  const XiEstimate est = estimate_xi(config.cells, config.delta);
  if (config.xi > est.min_h) {
    std::ostringstream msg;
    msg << "xi = " << config.xi << " exceeds the sampled singular-set minimum of h ("
        << est.min_h << "); L_g b1 can vanish inside C_h \\ C_{h,xi}";
    throw Error(ErrorCode::kValidationError, msg.str());
  }
}

FilterResult safety_filter(const Vector3& u_nom, const BarrierEval& eval,
                           const BarrierConfig& config) {
  const Vector3& a = eval.lg_b1;
  const double offset = eval.lf_b1 + config.beta_gain * eval.b1;
  const double slack = a.dot(u_nom) + offset;
  if (slack >= 0.0) return FilterResult{u_nom, 0.0, false, slack};
  const double norm2 = a.squaredNorm();
  if (norm2 == 0.0) {
    std::ostringstream msg;
    msg << "L_g b1 vanishes while L_f b1 + beta(b1) = " << offset
        << " < 0; state is outside C_b n C_b1";
    throw Error(ErrorCode::kInfeasibleState, msg.str());
  }
  const double mu = -slack / norm2;
  const Vector3 u = u_nom + mu * a;
  return FilterResult{u, mu, true, a.dot(u) + offset};
}

FilterResult safety_filter(const Vector3& u_nom, const EmbeddedState& x,
                           const BarrierConfig& config, const RigidBody& body) {
  return safety_filter(u_nom, lie_derivatives(x, config, body), config);
}

std::vector<MarginSweepRow> margin_sweep(const SamplingSet& cells, std::span<const double> deltas,
                                         std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double eps = epsilon_for(cells.radius());

  // Uniform on the union: draw from a random cell, keep with probability
  // 1 / (number of cells containing the draw).
  std::vector<double> sums;
  sums.reserve(samples);
  while (sums.size() < samples) {
    const Rotation r = uniform_rotation_in_cell(cells.cell(pick(rng)), rng);
    std::size_t multiplicity = 0;
    for (const Rotation& c : cells.centers()) {
      if (margin(r.matrix(), c.matrix(), eps) > 0.0) ++multiplicity;
    }
    if (multiplicity == 0 || unit(rng) * multiplicity >= 1.0) continue;
    sums.push_back(smoothed_sum(r.matrix(), cells));
  }

  std::vector<MarginSweepRow> rows;
  for (double delta : deltas) {
    const auto kept = std::count_if(sums.begin(), sums.end(), [delta](double s) { return s - delta >= 0.0; });
    rows.push_back({delta, samples == 0 ? 0.0 : static_cast<double>(kept) / samples});
  }
  return rows;
}

}  // namespace geo_attitude
