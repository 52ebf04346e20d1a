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

#include "geo_attitude/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

namespace {

// Richardson-extrapolated central difference of a scalar function along a line.
template <class F>
double derivative(const F& f, double k) {
  auto central = [&](double s) { return (f(s) - f(-s)) / (2.0 * s); };
  return (4.0 * central(k / 2.0) - central(k)) / 3.0;
}

bool close(double actual, double expected, double rel, double abs_floor) {
  return std::abs(actual - expected) <= std::max(rel * std::abs(expected), abs_floor);
}

std::string format_worst(const char* what, double worst) {
  std::ostringstream msg;
  msg << "worst " << what << " " << worst;
  return msg.str();
}

EmbeddedState random_state_in_union(const SamplingSet& cells, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::normal_distribution<double> normal(0.0, 0.1);
  const Rotation r = uniform_rotation_in_cell(cells.cell(pick(rng)), rng);
  return EmbeddedState::from(r, Vector3(normal(rng), normal(rng), normal(rng)));
}

// Symmetric body-velocity quotient of a curve at tau.
template <class Curve>
Vector3 body_velocity(const Curve& c, double tau, double k) {
  auto q = [&](double s) { return Vector3(log_so3(c(tau - s).transpose() * c(tau + s)) / (2.0 * s)); };
  return (4.0 * q(k / 2.0) - q(k)) / 3.0;
}

CheckResult check_endpoint_kinematics(const Scenario& s, const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, s.cells.size() - 1);
  double worst_velocity = 0.0;
  double worst_acceleration = 0.0;
  for (std::size_t n = 0; n < opt.samples; ++n) {
    const Cell cell = s.cells.cell(pick(rng));
    const OneCellCurve curve(uniform_rotation_in_cell(cell, rng), cell, uniform_rotation_in_cell(cell, rng));
    const auto& pts = curve.control_points();
    const ControlPolygon polygon({pts.begin(), pts.end()});
    auto c = [&](double tau) { return curve.evaluate(tau); };
    for (const auto& [tau, end] : {std::pair{0.0, CurveEnd::kStart}, std::pair{1.0, CurveEnd::kEnd}}) {
      const Vector3 v_expected = end == CurveEnd::kStart ? curve.start_velocity() : curve.end_velocity();
      const Vector3 v = body_velocity(c, tau, 1e-3);
      worst_velocity = std::max(worst_velocity, (v - v_expected).norm() / std::max(v_expected.norm(), 1e-12));
      constexpr double k = 1e-3;
      const Vector3 a = (4.0 * (body_velocity(c, tau + k / 2, k) - body_velocity(c, tau - k / 2, k)) / k -
                         (body_velocity(c, tau + k, k) - body_velocity(c, tau - k, k)) / (2.0 * k)) /
                        3.0;
      worst_acceleration = std::max(worst_acceleration, (a - endpoint_acceleration(polygon, end)).norm());
    }
  }
  std::ostringstream detail;
  detail << "velocity rel err " << worst_velocity << ", acceleration residual " << worst_acceleration;
  return {"endpoint-kinematics", worst_velocity < 1e-5 && worst_acceleration < 1e-4, detail.str()};
}

CheckResult check_containment(const Scenario& s, const VerifyOptions& opt) {
  const PiecewiseCurve curve = build_multicell(plan(s), s.cells);
  const std::size_t per_segment = std::max<std::size_t>(opt.samples, 2);
  double worst = -1.0;  // max of d(c, center) - theta
  for (const OneCellCurve& seg : curve.segments()) {
    for (std::size_t k = 0; k <= per_segment; ++k) {
      const double tau = static_cast<double>(k) / static_cast<double>(per_segment);
      worst = std::max(worst, angular_distance(seg.evaluate(tau), seg.cell().center()) - s.cells.radius());
    }
  }
  return {"containment", worst < 0.0, format_worst("d(c, center) - theta:", worst)};
}

CheckResult check_lie_derivatives(const BarrierConfig& cfg, const RigidBody& body, const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  const InputMatrix g = input_matrix(body);
  std::size_t failures = 0;
  double worst_lg_h = 0.0;
  for (std::size_t n = 0; n < opt.samples; ++n) {
    EmbeddedState x = random_state_in_union(cfg.cells, rng);
    const double h = barrier_h(x.attitude, cfg);
    // b1 is only C^1 across h = xi, where central differences lose accuracy.
    if (h <= 0.0 || std::abs(h / cfg.xi - 1.0) < 1e-3) continue;
    const StateVector x0 = x.to_vector();
    const BarrierEval e = lie_derivatives(x, cfg, body);
    auto along = [&](const StateVector& dir, auto&& value) {
      return derivative(
          [&](double s) {
            return value(lie_derivatives(EmbeddedState::from_vector(x0 + s * dir), cfg, body));
          },
          1e-4);
    };
    const StateVector f = drift(x, body);
    bool ok = close(e.lf_h, along(f, [](const BarrierEval& v) { return v.h; }), 1e-5, 1e-9) &&
              close(e.lf2_h, along(f, [](const BarrierEval& v) { return v.lf_h; }), 1e-5, 1e-9) &&
              close(e.lf_b, along(f, [](const BarrierEval& v) { return v.b; }), 1e-5, 1e-9) &&
              close(e.lf_b1, along(f, [](const BarrierEval& v) { return v.b1; }), 1e-5, 1e-9);
    for (int j = 0; j < 3; ++j) {
      const StateVector gj = g.col(j);
      worst_lg_h = std::max(worst_lg_h, std::abs(along(gj, [](const BarrierEval& v) { return v.h; })));
      ok = ok && close(e.lglf_h(j), along(gj, [](const BarrierEval& v) { return v.lf_h; }), 1e-5, 1e-9) &&
           close(e.lg_b1(j), along(gj, [](const BarrierEval& v) { return v.b1; }), 1e-5, 1e-9);
    }
    if (!ok) ++failures;
  }
  std::ostringstream detail;
  detail << failures << " mismatching states, max |L_g h| " << worst_lg_h;
  return {"lie-derivatives", failures == 0 && worst_lg_h < 1e-8, detail.str()};
}

CheckResult check_singular_set(const BarrierConfig& cfg) {
  const XiEstimate est = estimate_xi(cfg.cells, cfg.delta);
  double worst_residual = 0.0;
  for (const SingularPoint& p : est.points) worst_residual = std::max(worst_residual, p.gradient_residual);
  std::ostringstream detail;
  detail << est.points.size() << " points, min h " << est.min_h << ", xi " << cfg.xi << ", residual "
         << worst_residual;
  return {"singular-set", worst_residual < 1e-8 && cfg.xi <= est.min_h, detail.str()};
}

CheckResult check_safety_filter(const BarrierConfig& cfg, const RigidBody& body, const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed + 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_error = 0.0;
  double worst_constraint = 0.0;
  std::size_t tested = 0;
  for (std::size_t attempt = 0; tested < opt.samples && attempt < 100 * opt.samples; ++attempt) {
    const EmbeddedState x = random_state_in_union(cfg.cells, rng);
    const BarrierEval e = lie_derivatives(x, cfg, body);
    if (e.b < 0.0 || e.lg_b1.squaredNorm() < 1e-12) continue;
    const Vector3& a = e.lg_b1;
    const double c = e.lf_b1 + cfg.beta_gain * e.b1;
    Vector3 u_nom(normal(rng), normal(rng), normal(rng));
    const double slack = a.dot(u_nom) + c;
    if (slack >= 0.0) u_nom -= (slack + std::abs(normal(rng))) / a.squaredNorm() * a;
    // Stationarity and the active constraint as one linear system.
    Eigen::Matrix4d kkt = Eigen::Matrix4d::Zero();
    kkt.topLeftCorner<3, 3>() = 2.0 * Matrix3::Identity();
    kkt.topRightCorner<3, 1>() = -a;
    kkt.bottomLeftCorner<1, 3>() = a.transpose();
    Eigen::Vector4d rhs;
    rhs << 2.0 * u_nom, -c;
    const Vector3 oracle = kkt.fullPivLu().solve(rhs).head<3>();
    const FilterResult r = safety_filter(u_nom, e, cfg);
    worst_error = std::max(worst_error, (r.u - oracle).norm());
    worst_constraint = std::min(worst_constraint, a.dot(r.u) + c);
    ++tested;
  }
  std::ostringstream detail;
  detail << tested << " active states, max |u - oracle| " << worst_error << ", min constraint "
         << worst_constraint;
  return {"safety-filter", tested == opt.samples && worst_error < 1e-8 && worst_constraint >= -1e-10,
          detail.str()};
}

}  // namespace

std::vector<CheckResult> run_verification(const Scenario& scenario, const VerifyOptions& options) {
  std::vector<CheckResult> out;
  auto guarded = [&](const char* name, auto&& suite) {
    try {
      out.push_back(suite());
    } catch (const Error& e) {
      out.push_back({name, false, e.what()});
    }
  };
  guarded("endpoint-kinematics", [&] { return check_endpoint_kinematics(scenario, options); });
  guarded("containment", [&] { return check_containment(scenario, options); });
  if (!scenario.barrier) {
    for (const char* name : {"lie-derivatives", "singular-set", "safety-filter"}) {
      out.push_back({name, true, "skipped: no barrier block"});
    }
    return out;
  }
  const RigidBody body(scenario.inertia);
  const BarrierConfig cfg = barrier_config(scenario);
  guarded("lie-derivatives", [&] { return check_lie_derivatives(cfg, body, options); });
  guarded("singular-set", [&] { return check_singular_set(cfg); });
  guarded("safety-filter", [&] { return check_safety_filter(cfg, body, options); });
  return out;
}

}  // namespace geo_attitude
