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

#include <benchmark/benchmark.h>

#include "geo_attitude/bezier.hpp"
#include "geo_attitude/cbf.hpp"
#include "geo_attitude/control.hpp"
#include "geo_attitude/rigid_body.hpp"
#include "geo_attitude/scenario.hpp"

namespace ga = geo_attitude;

namespace {

const ga::Scenario& scenario() {
  static const ga::Scenario s = ga::load_scenario(GEO_ATTITUDE_SCENARIO_DIR "/scenario_v.json");
  return s;
}

ga::EmbeddedState near_start() {
  return ga::EmbeddedState::from(scenario().start, ga::Vector3(0.01, -0.02, 0.005));
}

void BM_GammaEval(benchmark::State& state) {
  const ga::TimedTrajectory traj = ga::reference_trajectory(scenario());
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ga::gamma_eval(traj, t));
    t = t > 40.0 ? 0.0 : t + 0.0137;
  }
}
BENCHMARK(BM_GammaEval);

void BM_LieDerivatives(benchmark::State& state) {
  const ga::BarrierConfig cfg = ga::barrier_config(scenario());
  const ga::RigidBody body(scenario().inertia);
  const ga::EmbeddedState x = near_start();
  for (auto _ : state) benchmark::DoNotOptimize(ga::lie_derivatives(x, cfg, body));
}
BENCHMARK(BM_LieDerivatives);

void BM_SafetyFilter(benchmark::State& state) {
  const ga::BarrierConfig cfg = ga::barrier_config(scenario());
  const ga::RigidBody body(scenario().inertia);
  const ga::BarrierEval e = ga::lie_derivatives(near_start(), cfg, body);
  const ga::Vector3 u_nom(0.3, -0.4, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(ga::safety_filter(u_nom, e, cfg));
}
BENCHMARK(BM_SafetyFilter);

void BM_Step(benchmark::State& state) {
  const ga::RigidBody body(scenario().inertia);
  ga::EmbeddedState x = near_start();
  for (auto _ : state) {
    x = ga::step(x, ga::Vector3(0.01, 0.0, -0.01), body, 1e-3);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Step);

void BM_ClosedLoopSecond(benchmark::State& state) {
  ga::Scenario s = scenario();
  ga::apply_case(s, 3);
  s.run.t_end = 1.0;
  const ga::SimulationSetup setup = ga::make_simulation(s);
  for (auto _ : state) benchmark::DoNotOptimize(ga::simulate(setup));
}
BENCHMARK(BM_ClosedLoopSecond)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
