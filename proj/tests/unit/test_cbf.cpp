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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "geo_attitude/cbf.hpp"
#include "geo_attitude/errors.hpp"
#include "support/oracles.hpp"

namespace ga = geo_attitude;

namespace {

ga::Rotation R(const oracle::Mat3& m) { return ga::Rotation::from_matrix(m); }

ga::SamplingSet chain_set() {
  const auto c = oracle::three_cell_chain();
  return ga::SamplingSet({R(c.centers[0]), R(c.centers[1]), R(c.centers[2])}, c.radius);
}

ga::BarrierConfig chain_config(double xi = 0.5) {
  ga::BarrierConfig cfg(chain_set(), 0.1, xi);
  cfg.alpha_gain = 1.3;
  cfg.beta_gain = 0.7;
  return cfg;
}

oracle::Barrier barrier_oracle(const ga::BarrierConfig& cfg, const oracle::Mat3& j) {
  std::vector<oracle::Mat3> centers;
  for (const auto& c : cfg.cells.centers()) centers.push_back(c.matrix());
  return oracle::Barrier(centers, cfg.cells.radius(), cfg.delta, cfg.xi, cfg.alpha_gain, j);
}

oracle::Vec12 random_admissible(const ga::BarrierConfig& cfg, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, cfg.cells.size() - 1);
  std::normal_distribution<double> n(0.0, 0.05);
  for (;;) {
    const oracle::Mat3 q = oracle::rotation_near(cfg.cells.center(pick(rng)).matrix(), cfg.cells.radius(), rng);
    if (ga::barrier_h(q, cfg) > 0.0) return oracle::pack(q, oracle::Vec3(n(rng), n(rng), n(rng)));
  }
}

}  // namespace

TEST(Cbf, TruncationFunctions) {
  for (auto kind : {ga::TruncationKind::kCubic, ga::TruncationKind::kQuartic}) {
    EXPECT_NEAR(ga::truncation(kind, 0.0).value, 0.0, 1e-15);
    const ga::ScalarDerivatives one = ga::truncation(kind, 1.0);
    EXPECT_EQ(one.value, 1.0);
    EXPECT_EQ(one.first, 0.0);
    EXPECT_EQ(one.second, 0.0);
    EXPECT_EQ(ga::truncation(kind, 4.0).value, 1.0);
    // Second derivative is continuous at the splice point.
    EXPECT_NEAR(ga::truncation(kind, 1.0 - 1e-7).second, 0.0, 1e-5);
    for (double a = -0.5; a < 1.0; a += 0.05) {
      const ga::ScalarDerivatives d = ga::truncation(kind, a);
      EXPECT_GT(d.first, 0.0);
      auto value = [&](double y) { return ga::truncation(kind, y).value; };
      EXPECT_NEAR(d.first, oracle::richardson_scalar(value, a, 1e-3), 1e-9);
      auto slope = [&](double y) { return ga::truncation(kind, y).first; };
      EXPECT_NEAR(d.second, oracle::richardson_scalar(slope, a, 1e-3), 1e-9);
    }
  }
  EXPECT_NEAR(ga::truncation(ga::TruncationKind::kCubic, 0.5).value, 0.875, 1e-15);
  EXPECT_NEAR(ga::truncation(ga::TruncationKind::kQuartic, 0.5).value, 0.9375, 1e-15);
}

TEST(Cbf, ConfigValidation) {
  EXPECT_NEAR(chain_config().epsilon(), 4.0 * std::pow(std::sin(0.3491 / 2.0), 2), 1e-15);
  ga::BarrierConfig cfg = chain_config();
  EXPECT_NO_THROW(cfg.validate());
  cfg.delta = 0.0;
  EXPECT_THROW(cfg.validate(), ga::Error);
  cfg = chain_config();
  cfg.xi = -1.0;
  EXPECT_THROW(cfg.validate(), ga::Error);
  cfg = chain_config();
  cfg.alpha_gain = 0.0;
  EXPECT_THROW(cfg.validate(), ga::Error);
}

TEST(Cbf, MarginSignMatchesContainment) {
  std::mt19937_64 rng(30);
  const ga::Cell cell(R(oracle::haar_rotation(rng)), 0.4);
  for (int i = 0; i < 1000; ++i) {
    const ga::Rotation r = R(oracle::rotation_near(cell.center().matrix(), 0.8, rng));
    EXPECT_EQ(ga::r_i(r, cell) > 0.0, ga::contains(cell, r));
  }
  EXPECT_NEAR(ga::r_i(cell.center(), cell), 4.0 * std::pow(std::sin(0.2), 2), 1e-15);
}

TEST(Cbf, BarrierValuesMatchOracle) {
  std::mt19937_64 rng(31);
  const ga::BarrierConfig cfg = chain_config();
  const oracle::Barrier o = barrier_oracle(cfg, oracle::three_cell_chain().inertia);
  for (int i = 0; i < 500; ++i) {
    const oracle::Vec12 x = random_admissible(cfg, rng);
    const oracle::Mat3 q = oracle::Barrier::attitude(x);
    EXPECT_NEAR(ga::barrier_h(q, cfg), o.h(x), 1e-13);
    EXPECT_NEAR(ga::barrier_b(q, cfg), o.b(x), 1e-12);
  }
  // Far from every cell h = -delta.
  EXPECT_NEAR(ga::barrier_h(R(oracle::rot(oracle::Vec3(0, 0, 2.5))), cfg), -0.1, 1e-15);
}

TEST(Cbf, LieDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(32);
  const ga::BarrierConfig cfg = chain_config();
  const ga::RigidBody body(oracle::three_cell_chain().inertia);
  const oracle::Barrier o = barrier_oracle(cfg, body.inertia());
  for (int i = 0; i < 300; ++i) {
    const oracle::Vec12 x = random_admissible(cfg, rng);
    const ga::BarrierEval e = ga::lie_derivatives(ga::EmbeddedState::from_vector(x), cfg, body);

    EXPECT_TRUE(oracle::close(e.lf_h, o.lf_h(x))) << e.lf_h << " vs " << o.lf_h(x);
    EXPECT_TRUE(oracle::close(e.lf_b, o.lf_b(x)));
    EXPECT_TRUE(oracle::close(e.b1, o.b1(x)));
    EXPECT_EQ(e.lg_h, ga::Vector3::Zero());
    EXPECT_TRUE(oracle::close(e.lf2_h, o.lf2_h(x))) << e.lf2_h << " vs " << o.lf2_h(x) << " h " << e.h << " b " << e.b;
    EXPECT_TRUE(oracle::close(e.lf_b1, o.lf_b1(x))) << e.lf_b1 << " vs " << o.lf_b1(x) << " h " << e.h;
    for (int k = 0; k < 3; ++k) {
      EXPECT_TRUE(oracle::close(e.lglf_h(k), o.lglf_h(x, k)));
      EXPECT_TRUE(oracle::close(e.lg_b1(k), o.lg_b1(x, k)));
    }
  }
}

TEST(Cbf, SingularSetEstimate) {
  const ga::XiEstimate est = ga::estimate_xi(chain_set(), 0.1);
  EXPECT_GT(est.min_h, 0.5);
  EXPECT_LT(est.min_h, 0.7);
  EXPECT_NEAR(est.xi_hat, 0.99 * est.min_h, 1e-15);
  // Three centers plus at least one interior zero per adjacent pair.
  EXPECT_GE(est.points.size(), 5u);
  const ga::BarrierConfig cfg = chain_config();
  const ga::RigidBody body(oracle::three_cell_chain().inertia);
  double min_h = 1e9;
  for (const ga::SingularPoint& p : est.points) {
    EXPECT_LT(p.gradient_residual, 1e-8);
    EXPECT_NEAR(p.h, ga::barrier_h(p.attitude, cfg), 1e-12);
    EXPECT_GT(p.h, 0.0);
    const ga::BarrierEval e = ga::lie_derivatives(ga::EmbeddedState::from(p.attitude, ga::Vector3::Zero()), cfg, body);
    EXPECT_LT(e.lglf_h.norm(), 1e-8);
    min_h = std::min(min_h, p.h);
  }
  EXPECT_EQ(min_h, est.min_h);
}

TEST(Cbf, SingularSetMinimumIsOnJunctionGeodesic) {
  // Independent scan of h on the geodesic between centers 1 and 2: the
  // smallest local extremum of h there is where L_gL_f h vanishes.
  const ga::SamplingSet set = chain_set();
  const oracle::Barrier o = barrier_oracle(chain_config(), oracle::Mat3::Identity());
  double best = 1e9;
  double prev = o.h(oracle::pack(set.center(1).matrix(), oracle::Vec3::Zero()));
  double cur = o.h(oracle::pack(ga::geodesic(set.center(1), set.center(2), 1e-4).matrix(), oracle::Vec3::Zero()));
  for (int k = 2; k <= 10000; ++k) {
    const double next = o.h(oracle::pack(ga::geodesic(set.center(1), set.center(2), k * 1e-4).matrix(), oracle::Vec3::Zero()));
    if ((cur - prev) * (next - cur) <= 0.0 && cur > 0.0) best = std::min(best, cur);
    prev = cur;
    cur = next;
  }
  const ga::XiEstimate est = ga::estimate_xi(set, 0.1);
  EXPECT_LE(est.min_h, best + 1e-9);
}

TEST(Cbf, XiValidation) {
  EXPECT_THROW(ga::validate_xi(chain_config(0.7)), ga::Error);
  EXPECT_NO_THROW(ga::validate_xi(chain_config(0.5)));
  try {
    ga::estimate_xi(chain_set(), 5.0);
    FAIL();
  } catch (const ga::Error& e) {
    EXPECT_EQ(e.code(), ga::ErrorCode::kNonPositive);
  }
}

TEST(Cbf, FilterMatchesHalfspaceProjection) {
  std::mt19937_64 rng(33);
  const ga::BarrierConfig cfg = chain_config();
  const ga::RigidBody body(oracle::three_cell_chain().inertia);
  std::normal_distribution<double> n(0.0, 2.0);
  int active = 0;
  for (int i = 0; i < 2000; ++i) {
    const ga::EmbeddedState x = ga::EmbeddedState::from_vector(random_admissible(cfg, rng));
    const ga::BarrierEval e = ga::lie_derivatives(x, cfg, body);
    if (e.lg_b1.norm() == 0.0) continue;
    const oracle::Vec3 u_nom(n(rng), n(rng), n(rng));
    const ga::FilterResult r = ga::safety_filter(u_nom, e, cfg);
    const oracle::Vec3 expected = oracle::halfspace_projection(u_nom, e.lg_b1, e.lf_b1 + cfg.beta_gain * e.b1);
    EXPECT_LT((r.u - expected).norm(), 1e-8 * std::max(1.0, expected.norm()));
    EXPECT_GE(e.lg_b1.dot(r.u) + e.lf_b1 + cfg.beta_gain * e.b1, -1e-10);
    EXPECT_NEAR(r.constraint_value, e.lg_b1.dot(r.u) + e.lf_b1 + cfg.beta_gain * e.b1, 1e-12);
    if (r.active) {
      ++active;
      EXPECT_GT(r.multiplier, 0.0);
      EXPECT_NEAR(r.constraint_value, 0.0, 1e-10);
    } else {
      EXPECT_EQ(r.u, u_nom);
      EXPECT_EQ(r.multiplier, 0.0);
    }
    const ga::FilterResult again = ga::safety_filter(u_nom, x, cfg, body);
    EXPECT_EQ(again.u, r.u);
  }
  EXPECT_GT(active, 50);
}

TEST(Cbf, FilterInfeasibleWithoutInputDirection) {
  const ga::BarrierConfig cfg = chain_config();
  ga::BarrierEval e;
  e.b1 = -1.0;
  e.lf_b1 = -1.0;
  try {
    ga::safety_filter(ga::Vector3::Zero(), e, cfg);
    FAIL();
  } catch (const ga::Error& err) {
    EXPECT_EQ(err.code(), ga::ErrorCode::kInfeasibleState);
  }
  e.b1 = 1.0;
  e.lf_b1 = 0.0;
  EXPECT_FALSE(ga::safety_filter(oracle::Vec3(1, 2, 3), e, cfg).active);
}

TEST(Cbf, MarginSweepIsMonotone) {
  const std::vector<double> deltas{0.02, 0.1, 0.3, 0.6, 0.9};
  const auto rows = ga::margin_sweep(chain_set(), deltas, 20000, 4);
  ASSERT_EQ(rows.size(), deltas.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].delta, deltas[k]);
    EXPECT_GE(rows[k].retained_fraction, 0.0);
    EXPECT_LE(rows[k].retained_fraction, 1.0);
    if (k > 0) {
      EXPECT_LE(rows[k].retained_fraction, rows[k - 1].retained_fraction);
    }
  }
  // Independent estimate: Haar samples landing in the union, scored with the
  // oracle barrier.
  std::mt19937_64 rng(41);
  const oracle::Barrier o = barrier_oracle(chain_config(), oracle::Mat3::Identity());
  std::vector<int> kept(deltas.size(), 0);
  int in_union = 0;
  while (in_union < 4000) {
    const oracle::Mat3 q = oracle::haar_rotation(rng);
    bool inside = false;
    for (const auto& c : o.centers) inside = inside || oracle::angle_between(q, oracle::Mat3(c.cast<double>())) < 0.3491;
    if (!inside) continue;
    ++in_union;
    const double sum = o.h(oracle::pack(q, oracle::Vec3::Zero())) + static_cast<double>(o.delta);
    for (std::size_t k = 0; k < deltas.size(); ++k) kept[k] += sum - deltas[k] >= 0.0;
  }
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    EXPECT_NEAR(rows[k].retained_fraction, kept[k] / 4000.0, 0.04) << deltas[k];
  }
  const auto again = ga::margin_sweep(chain_set(), deltas, 20000, 4);
  EXPECT_EQ(again.back().retained_fraction, rows.back().retained_fraction);
}
