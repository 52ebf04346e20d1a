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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "geo_attitude/errors.hpp"
#include "geo_attitude/export.hpp"
#include "geo_attitude/scenario.hpp"
#include "geo_attitude/verify.hpp"

namespace ga = geo_attitude;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kVerifyFailed = 2,
  kRuntimeError = 3,
};

struct Options {
  std::string scenario;
  int case_label = 0;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t every = 1;
  double sample_dt = 0.01;
  std::size_t samples = 0;  // 0 = suite default
  std::vector<double> deltas{0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
};

// Writes to <out>/<name> when --out is set, otherwise to stdout.
template <class Writer>
void emit(const Options& opt, const std::string& name, Writer&& write) {
  if (opt.out.empty()) {
    write(std::cout);
    return;
  }
  std::filesystem::create_directories(opt.out);
  const auto path = std::filesystem::path(opt.out) / name;
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  write(file);
  std::cerr << "wrote " << path.string() << '\n';
}

ga::Scenario load(const Options& opt) {
  ga::Scenario s = ga::load_scenario(opt.scenario);
  if (opt.case_label != 0) ga::apply_case(s, opt.case_label);
  return s;
}

int cmd_plan(const Options& opt) {
  const ga::Scenario s = load(opt);
  const ga::CellSequence seq = ga::plan(s);
  const ga::TimedTrajectory traj = ga::reference_trajectory(s);
  nlohmann::json j = {{"cells", seq.indices},
                      {"length", seq.length()},
                      {"junction_times", traj.junction_times()}};
  emit(opt, "plan.json", [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  return kOk;
}

int cmd_trajectory(const Options& opt) {
  const ga::Scenario s = load(opt);
  const ga::TimedTrajectory smooth = ga::reference_trajectory(s);
  const ga::StopAndGoTrajectory baseline = ga::baseline_trajectory(s);
  if (!(opt.sample_dt > 0.0)) throw ga::Error(ga::ErrorCode::kValidationError, "--dt must be positive");
  const auto n = static_cast<std::size_t>(std::floor(s.run.t_end / opt.sample_dt + 1e-9));
  std::vector<ga::ReferenceSample> smooth_rows;
  std::vector<ga::ReferenceSample> baseline_rows;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * opt.sample_dt;
    smooth_rows.push_back({t, smooth.evaluate(t)});
    baseline_rows.push_back({t, baseline.evaluate(t)});
  }
  emit(opt, "reference.csv", [&](std::ostream& out) { ga::write_reference_csv(out, smooth_rows); });
  if (!opt.out.empty()) {
    emit(opt, "baseline.csv", [&](std::ostream& out) { ga::write_reference_csv(out, baseline_rows); });
  }
  return kOk;
}

int cmd_simulate(const Options& opt) {
  const ga::Scenario s = load(opt);
  const ga::SimulationSetup setup = ga::make_simulation(s);
  if (setup.barrier && setup.filter_enabled) {
    const ga::XiEstimate est = ga::estimate_xi(setup.barrier->cells, setup.barrier->delta);
    if (setup.barrier->xi > est.min_h) {
      std::cerr << "warning: xi = " << setup.barrier->xi
                << " exceeds the sampled singular-set minimum of h (" << est.min_h
                << "); the filter may meet L_g b1 = 0 with h < xi\n";
    }
  }
  const ga::SimulationResult result = ga::run_simulation(setup);
  const int label = s.run.case_label.value_or(0);
  const std::string suffix = label != 0 ? "_case" + std::to_string(label) : "";
  if (!opt.out.empty()) {
    emit(opt, "log" + suffix + ".csv",
         [&](std::ostream& out) { ga::write_log_csv(out, result.log, opt.every); });
  }
  emit(opt, "summary" + suffix + ".json",
       [&](std::ostream& out) { out << ga::summary_json(result.summary, label); });
  return kOk;
}

int cmd_verify(const Options& opt) {
  const ga::Scenario s = load(opt);
  ga::VerifyOptions vopt;
  vopt.seed = opt.seed;
  if (opt.samples != 0) vopt.samples = opt.samples;
  bool all = true;
  for (const ga::CheckResult& r : ga::run_verification(s, vopt)) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kVerifyFailed;
}

int cmd_margin_sweep(const Options& opt) {
  const ga::Scenario s = load(opt);
  for (double d : opt.deltas) {
    if (!(d > 0.0)) throw ga::Error(ga::ErrorCode::kValidationError, "--deltas must be positive");
  }
  const auto rows =
      ga::margin_sweep(s.cells, opt.deltas, opt.samples != 0 ? opt.samples : 100000, opt.seed);
  emit(opt, "margin_sweep.csv", [&](std::ostream& out) { ga::write_margin_sweep_csv(out, rows); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-based attitude planning with barrier-function safety filtering"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", opt.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--case", opt.case_label, "Run case: 1 filter, 2 disturbance, 3 both")
        ->check(CLI::IsMember({1, 2, 3}));
    sub->add_option("--out", opt.out, "Output directory (default: stdout)");
    sub->add_option("--seed", opt.seed, "Seed for randomized suites");
  };

  auto* plan = app.add_subcommand("plan", "Print the planned cell sequence");
  add_common(plan);
  auto* trajectory = app.add_subcommand("trajectory", "Sample the smooth reference and the stop-and-go baseline");
  add_common(trajectory);
  trajectory->add_option("--dt", opt.sample_dt, "Sampling step in seconds");
  auto* simulate = app.add_subcommand("simulate", "Run the closed loop and write the log and summary");
  add_common(simulate);
  simulate->add_option("--every", opt.every, "Write every N-th log row")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "Run the numerical self-check suites");
  add_common(verify);
  verify->add_option("--samples", opt.samples, "Random samples per suite");
  auto* sweep = app.add_subcommand("margin-sweep", "Fraction of the cell union kept for each delta");
  add_common(sweep);
  sweep->add_option("--deltas", opt.deltas, "Safety margins")->delimiter(',');
  sweep->add_option("--samples", opt.samples, "Monte Carlo samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*plan) return cmd_plan(opt);
    if (*trajectory) return cmd_trajectory(opt);
    if (*simulate) return cmd_simulate(opt);
    if (*verify) return cmd_verify(opt);
    if (*sweep) return cmd_margin_sweep(opt);
  } catch (const ga::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool input = e.code() == ga::ErrorCode::kParseError || e.code() == ga::ErrorCode::kValidationError;
    return input ? kInvalidInput : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kInvalidInput;
}
