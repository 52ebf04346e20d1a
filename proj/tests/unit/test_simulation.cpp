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

#include "geo_attitude/errors.hpp"
#include "geo_attitude/scenario.hpp"
#include "geo_attitude/simulation.hpp"

namespace ga = geo_attitude;

namespace {

ga::Scenario bundled(int case_label, double t_end) {
  ga::Scenario s = ga::load_scenario(GEO_ATTITUDE_SCENARIO_DIR "/scenario_v.json");
  ga::apply_case(s, case_label);
  s.run.t_end = t_end;
  return s;
}

}  // namespace

TEST(Simulation, LogLayout) {
  const ga::SimulationSetup setup = ga::make_simulation(bundled(1, 0.05));
  const ga::TrajectoryLog log = ga::simulate(setup);
  ASSERT_EQ(log.rows.size(), 51u);
  EXPECT_EQ(log.dt, 1e-3);
  EXPECT_EQ(log.rows.front().t, 0.0);
  EXPECT_DOUBLE_EQ(log.rows.back().t, 0.05);
  EXPECT_EQ(log.rows.front().attitude, setup.initial.attitude);
  for (const ga::LogRow& r : log.rows) {
    EXPECT_GT(r.b, 0.0);
    EXPECT_EQ(r.u_add, ga::Vector3::Zero());
    if (!r.filter_active) {
      EXPECT_EQ(r.u, r.u_nom);
    }
  }
}

TEST(Simulation, NoBarrierLogsNaN) {
  ga::Scenario s = bundled(2, 0.01);
  s.barrier.reset();
  const ga::SimulationResult r = ga::run_simulation(ga::make_simulation(s));
  EXPECT_TRUE(std::isnan(r.log.rows.front().h));
  EXPECT_TRUE(std::isnan(r.summary.min_b));
  EXPECT_GT(r.summary.wall_time, 0.0);
}

TEST(Simulation, AdmissionFailure) {
  const ga::Scenario s = bundled(1, 1.0);
  auto expect_rejected = [&](const ga::EmbeddedState& x0) {
    ga::SimulationSetup setup = ga::make_simulation(s);
    setup.initial = x0;
    try {
      ga::simulate(setup);
      ADD_FAILURE() << "admitted";
    } catch (const ga::Error& e) {
      EXPECT_EQ(e.code(), ga::ErrorCode::kAdmissionFailed) << e.what();
      EXPECT_NE(std::string(e.what()).find("alpha_gain"), std::string::npos);
    }
  };
  // Outside every cell: b < 0.
  expect_rejected(ga::EmbeddedState::from(ga::exp_so3(ga::Vector3(0.0, 0.0, 2.0)), ga::Vector3::Zero()));

  // Near the outer edge of cell 0, moving outward fast: b > 0 but b1 < 0.
  const ga::Vector3 away = -ga::log_so3(s.cells.center(0).transpose() * s.cells.center(1)).normalized();
  const ga::Rotation edge = s.cells.center(0) * ga::exp_so3(0.3 * away);
  const ga::BarrierConfig cfg = ga::barrier_config(s);
  ASSERT_GT(ga::barrier_b(edge, cfg), 0.0);
  ASSERT_LT(ga::barrier_b(edge, cfg), 1.0);
  expect_rejected(ga::EmbeddedState::from(edge, 2.0 * away));
}

TEST(Simulation, InvalidSetup) {
  ga::SimulationSetup setup = ga::make_simulation(bundled(1, 1.0));
  setup.dt = 0.0;
  EXPECT_THROW(ga::simulate(setup), ga::Error);
  setup = ga::make_simulation(bundled(1, 1.0));
  setup.barrier.reset();
  EXPECT_THROW(ga::simulate(setup), ga::Error);
}

TEST(Simulation, Deterministic) {
  const ga::SimulationSetup setup = ga::make_simulation(bundled(3, 2.0));
  const ga::TrajectoryLog a = ga::simulate(setup);
  const ga::TrajectoryLog b = ga::simulate(setup);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  EXPECT_EQ(a.rows.back().attitude, b.rows.back().attitude);
  EXPECT_EQ(a.rows.back().omega, b.rows.back().omega);
}

TEST(Simulation, FilterIsInertUntilFirstActivation) {
  ga::SimulationSetup on = ga::make_simulation(bundled(3, 24.0));
  ga::SimulationSetup off = on;
  off.filter_enabled = false;
  const ga::TrajectoryLog a = ga::simulate(on);
  const ga::TrajectoryLog b = ga::simulate(off);
  std::size_t first = 0;
  while (first < a.rows.size() && !a.rows[first].filter_active) ++first;
  ASSERT_LT(first, a.rows.size()) << "filter never activated";
  std::size_t diverge = 0;
  while (diverge < a.rows.size() && a.rows[diverge].attitude == b.rows[diverge].attitude &&
         a.rows[diverge].omega == b.rows[diverge].omega) {
    ++diverge;
  }
  // A clipped RK4 stage inside the step after row `first` at the latest.
  EXPECT_GT(diverge, 1000u);
  EXPECT_LE(diverge, first + 1);
}

TEST(Simulation, SummaryStatistics) {
  ga::TrajectoryLog log;
  for (int k = 0; k < 3; ++k) {
    ga::LogRow r;
    r.t = k;
    r.h = 1.0 - k;
    r.b = 2.0 - k;
    r.b1 = 3.0 + k;
    r.ref_speed = k == 1 ? 4.0 : 0.0;
    r.track_err = 0.1 * k;
    r.filter_active = k > 0;
    log.rows.push_back(r);
  }
  const ga::RunSummary s = ga::summarize(log);
  EXPECT_EQ(s.min_h, -1.0);
  EXPECT_EQ(s.min_b, 0.0);
  EXPECT_EQ(s.min_b1, 3.0);
  EXPECT_EQ(s.max_ref_speed, 4.0);
  EXPECT_DOUBLE_EQ(s.terminal_error, 0.2);
  EXPECT_EQ(s.activation_count, 2u);
  EXPECT_EQ(s.wall_time, 0.0);
}

// Randomized disturbance profiles: the filtered loop keeps b >= 0 and the
// run never reaches an infeasible state.
TEST(SimulationSlow, FilterKeepsBarrierUnderRandomDisturbances) {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> amplitude(0.05, 0.4);
  std::uniform_real_distribution<double> onset(4.0, 20.0);
  std::uniform_real_distribution<double> period(2.0, 8.0);
  for (int run = 0; run < 20; ++run) {
    ga::Scenario s = bundled(3, 0.0);
    s.disturbance->amplitude = amplitude(rng);
    s.disturbance->t_on = onset(rng);
    s.disturbance->t_off = s.disturbance->t_on + 5.0;
    s.disturbance->period = period(rng);
    s.run.t_end = s.disturbance->t_off + 2.0;
    s.run.dt = 2e-3;
    SCOPED_TRACE(::testing::Message() << "run " << run << " amplitude " << s.disturbance->amplitude
                                      << " onset " << s.disturbance->t_on << " period "
                                      << s.disturbance->period);
    ga::RunSummary sum;
    try {
      sum = ga::run_simulation(ga::make_simulation(s)).summary;
    } catch (const ga::Error& e) {
      ADD_FAILURE() << e.what();
      continue;
    }
    EXPECT_GE(sum.min_b, 0.0);
    EXPECT_GE(sum.min_b1, 0.0);
    EXPECT_LT(sum.max_orthonormality_residual, 1e-9);
  }
}
