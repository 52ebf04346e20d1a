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

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>

#include "geo_attitude/errors.hpp"
#include "geo_attitude/export.hpp"
#include "geo_attitude/scenario.hpp"
#include "support/oracles.hpp"

namespace ga = geo_attitude;
using nlohmann::json;

namespace {

const std::string kBundled = GEO_ATTITUDE_SCENARIO_DIR "/scenario_v.json";

json minimal() {
  return json::parse(R"({
    "version": 1,
    "cells": {"radius": 0.4, "centers": [{"rotvec": [0, 0, 0]}, {"rotvec": [0, 0, 0.6]}]},
    "start": {"rotvec": [0, 0, 0.05]},
    "goal": {"center": 1},
    "settling_time": 10,
    "inertia": [[2, 0, 0], [0, 3, 0], [0, 0, 4]],
    "gains": {"k1": 1, "k2": 1}
  })");
}

// Validation message for a scenario that must be rejected.
std::string rejection(const json& j) {
  try {
    ga::parse_scenario(j.dump());
  } catch (const ga::Error& e) {
    EXPECT_EQ(e.code(), ga::ErrorCode::kValidationError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << j.dump();
  return {};
}

}  // namespace

TEST(Scenario, BundledValues) {
  const ga::Scenario s = ga::load_scenario(kBundled);
  const auto c = oracle::three_cell_chain();
  ASSERT_EQ(s.cells.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT((s.cells.center(i).matrix() - c.centers[i]).norm(), 1e-12);
  EXPECT_LT((s.start.matrix() - c.start).norm(), 1e-12);
  EXPECT_EQ(s.goal, ga::Rotation());
  EXPECT_EQ(s.cells.radius(), 0.3491);
  EXPECT_EQ(s.inertia, c.inertia);
  EXPECT_EQ(s.settling_time, 40.0);
  EXPECT_EQ(s.gains.k1, 0.2);
  ASSERT_TRUE(s.barrier);
  EXPECT_EQ(s.barrier->delta, 0.1);
  EXPECT_EQ(s.barrier->xi, 0.7);
  EXPECT_EQ(s.barrier->chi, ga::TruncationKind::kCubic);
  ASSERT_TRUE(s.disturbance);
  EXPECT_EQ(s.disturbance->t_on, 20.0);
  EXPECT_EQ(s.run.case_label, 1);
  EXPECT_TRUE(s.run.filter);
  EXPECT_FALSE(s.run.disturbance);
  EXPECT_EQ(ga::plan(s).indices, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Scenario, RoundTripIsExact) {
  const ga::Scenario s = ga::load_scenario(kBundled);
  const std::string text = ga::serialize_scenario(s);
  const ga::Scenario back = ga::parse_scenario(text);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back.cells.center(i), s.cells.center(i));
  EXPECT_EQ(back.start, s.start);
  EXPECT_EQ(back.goal, s.goal);
  EXPECT_EQ(back.inertia, s.inertia);
  EXPECT_EQ(back.barrier->xi, s.barrier->xi);
  EXPECT_EQ(back.run.case_label, s.run.case_label);
  EXPECT_EQ(ga::serialize_scenario(back), text);
}

TEST(Scenario, DefaultsForOptionalBlocks) {
  const ga::Scenario s = ga::parse_scenario(minimal().dump());
  EXPECT_FALSE(s.barrier);
  EXPECT_FALSE(s.disturbance);
  EXPECT_FALSE(s.run.filter);
  EXPECT_FALSE(s.run.disturbance);
  EXPECT_EQ(s.run.dt, 1e-3);
  EXPECT_EQ(s.goal, s.cells.center(1));
  EXPECT_EQ(s.inertia, oracle::Mat3(oracle::Vec3(2, 3, 4).asDiagonal()));

  json j = minimal();
  j["barrier"] = {{"delta", 0.1}};
  const ga::Scenario with_barrier = ga::parse_scenario(j.dump());
  EXPECT_TRUE(with_barrier.run.filter);
  EXPECT_FALSE(with_barrier.barrier->xi);
  const ga::BarrierConfig cfg = ga::barrier_config(with_barrier);
  EXPECT_NEAR(cfg.xi, ga::estimate_xi(with_barrier.cells, 0.1).xi_hat, 1e-15);
}

TEST(Scenario, DegreeUnits) {
  json j = minimal();
  j["units"] = "deg";
  j["cells"]["radius"] = 0.4 * 180.0 / M_PI;
  j["cells"]["centers"][1] = {{"rotvec", {0, 0, 0.6 * 180.0 / M_PI}}};
  j["start"] = {{"units", "rad"}, {"rotvec", {0, 0, 0.05}}};
  const ga::Scenario deg = ga::parse_scenario(j.dump());
  const ga::Scenario rad = ga::parse_scenario(minimal().dump());
  EXPECT_NEAR(deg.cells.radius(), rad.cells.radius(), 1e-15);
  EXPECT_LT((deg.cells.center(1).matrix() - rad.cells.center(1).matrix()).norm(), 1e-15);
  EXPECT_EQ(deg.start, rad.start);
}

TEST(Scenario, MatrixRotations) {
  json j = minimal();
  const oracle::Mat3 r = oracle::rot(oracle::Vec3(0, 0, 0.6));
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({r(i, 0), r(i, 1), r(i, 2)});
  j["cells"]["centers"][1] = {{"matrix", rows}};
  EXPECT_LT((ga::parse_scenario(j.dump()).cells.center(1).matrix() - r).norm(), 1e-15);

  rows[0][0] = r(0, 0) + 1e-5;
  j["cells"]["centers"][1] = {{"matrix", rows}};
  EXPECT_LT(ga::parse_scenario(j.dump()).cells.center(1).orthonormality_residual(), 1e-14);

  rows[0][0] = r(0, 0) + 0.1;
  j["cells"]["centers"][1] = {{"matrix", rows}};
  EXPECT_NE(rejection(j).find("cells.centers[1].matrix"), std::string::npos);
}

TEST(Scenario, RejectsInvalidInput) {
  EXPECT_THROW(ga::parse_scenario("{not json"), ga::Error);
  try {
    ga::parse_scenario("{not json");
  } catch (const ga::Error& e) {
    EXPECT_EQ(e.code(), ga::ErrorCode::kParseError);
  }
  EXPECT_THROW(ga::load_scenario("/nonexistent/scenario.json"), ga::Error);

  struct Case {
    std::string pointer;
    json value;
    std::string field;
  };
  const std::vector<Case> cases = {
      {"/version", 2, "version"},
      {"/extra", 1, "extra"},
      {"/cells/radius", 1.6, "cells"},
      {"/cells/centers", json::array(), "cells.centers"},
      {"/settling_time", 0, "settling_time"},
      {"/inertia", {1, 2, 3}, "inertia"},
      {"/gains/k1", -1, "gains.k1"},
      {"/gains/k3", 1, "gains.k3"},
      {"/start", {{"center", 5}}, "start"},
      {"/start", {{"quaternion", {1, 0, 0, 0}}}, "start"},
      {"/units", "grad", "units"},
      {"/barrier", {{"delta", -0.1}}, "barrier.delta"},
      {"/barrier", {{"delta", 0.1}, {"chi", "linear"}}, "barrier.chi"},
      {"/disturbance", {{"t_on", 5}, {"t_off", 1}}, "disturbance"},
      {"/run", {{"case", 4}}, "run.case"},
      {"/run", {{"filter", true}}, "run.filter"},
      {"/run", {{"dt", 0}}, "run.dt"},
  };
  for (const Case& c : cases) {
    json j = minimal();
    j[json::json_pointer(c.pointer)] = c.value;
    EXPECT_NE(rejection(j).find(c.field), std::string::npos) << c.pointer;
  }
  json j = minimal();
  j["cells"]["centers"][1] = {{"center", 0}};
  EXPECT_NE(rejection(j).find("cells.centers[1]"), std::string::npos);
  j = minimal();
  j.erase("goal");
  EXPECT_NE(rejection(j).find("goal"), std::string::npos);
}

TEST(Scenario, StrictXi) {
  ga::Scenario s = ga::load_scenario(kBundled);
  EXPECT_NO_THROW(ga::barrier_config(s));
  json j = json::parse(ga::serialize_scenario(s));
  j["barrier"]["strict_xi"] = true;
  EXPECT_NE(rejection(j).find("barrier.xi"), std::string::npos);
  j["barrier"]["xi"] = 0.5;
  EXPECT_NO_THROW(ga::parse_scenario(j.dump()));
}

TEST(Scenario, CaseSelection) {
  ga::Scenario s = ga::load_scenario(kBundled);
  ga::apply_case(s, 2);
  EXPECT_FALSE(s.run.filter);
  EXPECT_TRUE(s.run.disturbance);
  ga::apply_case(s, 3);
  EXPECT_TRUE(s.run.filter);
  EXPECT_TRUE(s.run.disturbance);
  EXPECT_EQ(s.run.case_label, 3);
  const ga::SimulationSetup setup = ga::make_simulation(s);
  EXPECT_TRUE(setup.disturbance);
  EXPECT_TRUE(setup.filter_enabled);
  EXPECT_THROW(ga::apply_case(s, 0), ga::Error);

  ga::Scenario bare = ga::parse_scenario(minimal().dump());
  EXPECT_THROW(ga::apply_case(bare, 1), ga::Error);
}

TEST(Export, CsvAndJsonLayout) {
  ga::TrajectoryLog log;
  log.dt = 0.5;
  for (int k = 0; k < 5; ++k) {
    ga::LogRow r;
    r.t = 0.5 * k;
    r.h = r.b = r.b1 = std::numeric_limits<double>::quiet_NaN();
    log.rows.push_back(r);
  }
  std::ostringstream csv;
  ga::write_log_csv(csv, log, 2);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "t,r11,r12,r13,r21,r22,r23,r31,r32,r33,w1,w2,w3,unom1,unom2,unom3,u1,u2,u3,h,b,b1,track_err");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 3);

  ga::RunSummary sum;
  sum.min_b = std::numeric_limits<double>::quiet_NaN();
  sum.activation_count = 7;
  const json j = json::parse(ga::summary_json(sum, 2));
  EXPECT_TRUE(j["min_b"].is_null());
  EXPECT_EQ(j["activation_count"], 7);
  EXPECT_EQ(j["case"], 2);

  std::ostringstream sweep;
  const std::vector<ga::MarginSweepRow> rows{{0.1, 0.5}};
  ga::write_margin_sweep_csv(sweep, rows);
  EXPECT_EQ(sweep.str(), "delta,retained_fraction\n0.1,0.5\n");
}
