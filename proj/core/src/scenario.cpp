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

#include "geo_attitude/scenario.hpp"

#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

namespace {

using nlohmann::json;

constexpr double kMatrixProjectionThreshold = 1e-12;
constexpr double kMatrixRejectThreshold = 1e-3;

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kValidationError, path + ": " + what);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void expect_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) invalid(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string_view> allowed(keys);
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) invalid(join(path, key), "unknown field");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) invalid(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(path, "must be finite");
  return x;
}

double number_or(const json& obj, std::string_view key, const std::string& path, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, join(path, key));
}

bool boolean_or(const json& obj, std::string_view key, const std::string& path, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) invalid(join(path, key), "expected true or false");
  return it->get<bool>();
}

const json& required(const json& obj, std::string_view key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) invalid(join(path, key), "required field is missing");
  return *it;
}

double angle_scale(const json& v, const std::string& path) {
  if (!v.is_string()) invalid(path, "expected \"rad\" or \"deg\"");
  const auto s = v.get<std::string>();
  if (s == "rad") return 1.0;
  if (s == "deg") return std::numbers::pi / 180.0;
  invalid(path, "expected \"rad\" or \"deg\", got \"" + s + "\"");
}

Vector3 vector3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) invalid(path, "expected 3 numbers");
  return {number(v[0], index(path, 0)), number(v[1], index(path, 1)), number(v[2], index(path, 2))};
}

// Accepts 9 numbers row-major or three rows of three.
Matrix3 matrix3(const json& v, const std::string& path) {
  Matrix3 m;
  if (v.is_array() && v.size() == 9) {
    for (std::size_t k = 0; k < 9; ++k) m(k / 3, k % 3) = number(v[k], index(path, k));
    return m;
  }
  if (v.is_array() && v.size() == 3) {
    for (std::size_t r = 0; r < 3; ++r) m.row(r) = vector3(v[r], index(path, r));
    return m;
  }
  invalid(path, "expected 9 numbers or a 3x3 nested array");
}

json matrix_json(const Matrix3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.push_back(m(r, c));
  }
  return out;
}

struct RotationContext {
  double scale = 1.0;
  const SamplingSet* centers = nullptr;  // enables {"center": k}
};

Rotation rotation(const json& v, const std::string& path, RotationContext ctx) {
  if (!v.is_object() || v.size() == 0) invalid(path, "expected a rotation object");
  if (const auto it = v.find("units"); it != v.end()) ctx.scale = angle_scale(*it, join(path, "units"));

  if (v.contains("rotvec")) {
    expect_keys(v, path, {"rotvec", "units"});
    const Vector3 rv = ctx.scale * vector3(v["rotvec"], join(path, "rotvec"));
    if (rv.norm() >= std::numbers::pi) invalid(join(path, "rotvec"), "rotation angle must be below pi");
    return exp_so3(rv);
  }
  if (v.contains("matrix")) {
    expect_keys(v, path, {"matrix", "units"});
    const std::string p = join(path, "matrix");
    const Matrix3 m = matrix3(v["matrix"], p);
    const double residual = orthonormality_residual(m);
    if (residual <= kMatrixProjectionThreshold && m.determinant() > 0.0) {
      return Rotation::from_matrix_unchecked(m);
    }
    if (residual > kMatrixRejectThreshold) {
      std::ostringstream msg;
      msg << "not a rotation matrix (orthonormality residual " << residual << ")";
      invalid(p, msg.str());
    }
    try {
      return Rotation::nearest(m);
    } catch (const Error& e) {
      invalid(p, e.what());
    }
  }
  if (v.contains("product")) {
    expect_keys(v, path, {"product", "units"});
    const json& factors = v["product"];
    const std::string p = join(path, "product");
    if (!factors.is_array() || factors.empty()) invalid(p, "expected a non-empty list of rotations");
    Matrix3 acc = Matrix3::Identity();
    for (std::size_t k = 0; k < factors.size(); ++k) {
      acc = acc * rotation(factors[k], index(p, k), ctx).matrix();
    }
    return Rotation::nearest(acc);
  }
  if (v.contains("center")) {
    expect_keys(v, path, {"center", "units"});
    const std::string p = join(path, "center");
    if (ctx.centers == nullptr) invalid(p, "cell references are only allowed for start and goal");
    if (!v["center"].is_number_unsigned()) invalid(p, "expected a non-negative integer");
    const auto k = v["center"].get<std::size_t>();
    if (k >= ctx.centers->size()) invalid(p, "no cell with index " + std::to_string(k));
    return ctx.centers->center(k);
  }
  invalid(path, "expected one of rotvec, matrix, product, center");
}

TruncationKind truncation_kind(const json& v, const std::string& path) {
  if (v == "cubic") return TruncationKind::kCubic;
  if (v == "quartic") return TruncationKind::kQuartic;
  invalid(path, "expected \"cubic\" or \"quartic\"");
}

std::string_view truncation_name(TruncationKind kind) {
  return kind == TruncationKind::kCubic ? "cubic" : "quartic";
}

SamplingSet cells_from(const json& root, double scale) {
  const json& cells = required(root, "cells", "");
  expect_keys(cells, "cells", {"radius", "centers"});
  const double radius = scale * number(required(cells, "radius", "cells"), "cells.radius");
  const json& list = required(cells, "centers", "cells");
  if (!list.is_array()) invalid("cells.centers", "expected a list of rotations");
  if (list.empty()) invalid("cells.centers", "at least one cell is required");
  std::vector<Rotation> centers;
  for (std::size_t i = 0; i < list.size(); ++i) {
    centers.push_back(rotation(list[i], index("cells.centers", i), {scale, nullptr}));
  }
  try {
    return SamplingSet(std::move(centers), radius);
  } catch (const Error& e) {
    invalid("cells", e.what());
  }
}

void validate_run(Scenario& s) {
  if (!(s.settling_time > 0.0)) invalid("settling_time", "must be positive");
  try {
    RigidBody body(s.inertia);
  } catch (const Error& e) {
    invalid("inertia", e.what());
  }
  if (!(s.gains.k1 > 0.0)) invalid("gains.k1", "must be positive");
  if (!(s.gains.k2 > 0.0)) invalid("gains.k2", "must be positive");
  if (s.barrier) {
    const BarrierSettings& b = *s.barrier;
    if (!(b.delta > 0.0)) invalid("barrier.delta", "must be positive");
    if (b.xi && !(*b.xi > 0.0)) invalid("barrier.xi", "must be positive");
    if (!(b.alpha_gain > 0.0)) invalid("barrier.alpha_gain", "must be positive");
    if (!(b.beta_gain > 0.0)) invalid("barrier.beta_gain", "must be positive");
  }
  if (s.disturbance) {
    if (!(s.disturbance->t_on < s.disturbance->t_off)) {
      invalid("disturbance", "t_on must be less than t_off");
    }
    if (!(s.disturbance->period > 0.0)) invalid("disturbance.period", "must be positive");
  }
  if (!(s.run.dt > 0.0)) invalid("run.dt", "must be positive");
  if (!(s.run.t_end >= 0.0)) invalid("run.t_end", "must be non-negative");
  if (s.run.filter && !s.barrier) invalid("run.filter", "the filter needs a barrier block");
  if (s.run.disturbance && !s.disturbance) {
    invalid("run.disturbance", "no disturbance block is configured");
  }
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  expect_keys(root, "", {"version", "description", "units", "cells", "start", "goal", "settling_time",
                         "inertia", "gains", "barrier", "disturbance", "run"});

  const json& version = required(root, "version", "");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    invalid("version", "unsupported version (expected 1)");
  }
  std::string description;
  if (const auto it = root.find("description"); it != root.end()) {
    if (!it->is_string()) invalid("description", "expected a string");
    description = it->get<std::string>();
  }
  const double scale = root.contains("units") ? angle_scale(root["units"], "units") : 1.0;

  SamplingSet cells = cells_from(root, scale);
  const RotationContext with_cells{scale, &cells};
  Scenario s{
      .version = 1,
      .description = std::move(description),
      .cells = cells,
      .start = rotation(required(root, "start", ""), "start", with_cells),
      .goal = rotation(required(root, "goal", ""), "goal", with_cells),
      .settling_time = number(required(root, "settling_time", ""), "settling_time"),
      .inertia = matrix3(required(root, "inertia", ""), "inertia"),
      .gains = {},
      .barrier = std::nullopt,
      .disturbance = std::nullopt,
      .run = {},
  };

  if (const auto it = root.find("gains"); it != root.end()) {
    expect_keys(*it, "gains", {"k1", "k2"});
    s.gains.k1 = number_or(*it, "k1", "gains", s.gains.k1);
    s.gains.k2 = number_or(*it, "k2", "gains", s.gains.k2);
  }

  if (const auto it = root.find("barrier"); it != root.end()) {
    const json& b = *it;
    expect_keys(b, "barrier", {"delta", "xi", "alpha_gain", "beta_gain", "chi", "strict_xi"});
    BarrierSettings settings;
    settings.delta = number_or(b, "delta", "barrier", settings.delta);
    if (b.contains("xi")) settings.xi = number(b["xi"], "barrier.xi");
    settings.alpha_gain = number_or(b, "alpha_gain", "barrier", settings.alpha_gain);
    settings.beta_gain = number_or(b, "beta_gain", "barrier", settings.beta_gain);
    if (b.contains("chi")) settings.chi = truncation_kind(b["chi"], "barrier.chi");
    settings.strict_xi = boolean_or(b, "strict_xi", "barrier", false);
    s.barrier = settings;
  }

  if (const auto it = root.find("disturbance"); it != root.end()) {
    const json& d = *it;
    expect_keys(d, "disturbance", {"amplitude", "t_on", "t_off", "period"});
    DisturbanceSpec spec;
    spec.amplitude = number_or(d, "amplitude", "disturbance", spec.amplitude);
    spec.t_on = number_or(d, "t_on", "disturbance", spec.t_on);
    spec.t_off = number_or(d, "t_off", "disturbance", spec.t_off);
    spec.period = number_or(d, "period", "disturbance", spec.period);
    s.disturbance = spec;
  }

  s.run.filter = s.barrier.has_value();
  s.run.disturbance = s.disturbance.has_value();
  if (const auto it = root.find("run"); it != root.end()) {
    const json& r = *it;
    expect_keys(r, "run", {"dt", "t_end", "filter", "disturbance", "case"});
    s.run.dt = number_or(r, "dt", "run", s.run.dt);
    s.run.t_end = number_or(r, "t_end", "run", s.run.t_end);
    s.run.filter = boolean_or(r, "filter", "run", s.run.filter);
    s.run.disturbance = boolean_or(r, "disturbance", "run", s.run.disturbance);
    if (r.contains("case")) {
      if (!r["case"].is_number_integer()) invalid("run.case", "expected 1, 2 or 3");
      apply_case(s, r["case"].get<int>());
    }
  }

  validate_run(s);
  if (s.barrier && s.barrier->strict_xi) {
    try {
      validate_xi(barrier_config(s));
    } catch (const Error& e) {
      invalid("barrier.xi", e.what());
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot read scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string serialize_scenario(const Scenario& s) {
  json root;
  root["version"] = s.version;
  if (!s.description.empty()) root["description"] = s.description;
  root["units"] = "rad";
  json centers = json::array();
  for (const Rotation& c : s.cells.centers()) centers.push_back({{"matrix", matrix_json(c.matrix())}});
  root["cells"] = {{"radius", s.cells.radius()}, {"centers", centers}};
  root["start"] = {{"matrix", matrix_json(s.start.matrix())}};
  root["goal"] = {{"matrix", matrix_json(s.goal.matrix())}};
  root["settling_time"] = s.settling_time;
  root["inertia"] = matrix_json(s.inertia);
  root["gains"] = {{"k1", s.gains.k1}, {"k2", s.gains.k2}};
  if (s.barrier) {
    const BarrierSettings& b = *s.barrier;
    json barrier = {{"delta", b.delta},
                    {"alpha_gain", b.alpha_gain},
                    {"beta_gain", b.beta_gain},
                    {"chi", truncation_name(b.chi)},
                    {"strict_xi", b.strict_xi}};
    if (b.xi) barrier["xi"] = *b.xi;
    root["barrier"] = barrier;
  }
  if (s.disturbance) {
    const DisturbanceSpec& d = *s.disturbance;
    root["disturbance"] = {
        {"amplitude", d.amplitude}, {"t_on", d.t_on}, {"t_off", d.t_off}, {"period", d.period}};
  }
  json run = {{"dt", s.run.dt},
              {"t_end", s.run.t_end},
              {"filter", s.run.filter},
              {"disturbance", s.run.disturbance}};
  if (s.run.case_label) run["case"] = *s.run.case_label;
  root["run"] = run;
  return root.dump(2) + "\n";
}

void apply_case(Scenario& s, int case_label) {
  switch (case_label) {
    case 1:
      s.run.filter = true;
      s.run.disturbance = false;
      break;
    case 2:
      s.run.filter = false;
      s.run.disturbance = true;
      break;
    case 3:
      s.run.filter = true;
      s.run.disturbance = true;
      break;
    default:
      invalid("run.case", "expected 1, 2 or 3, got " + std::to_string(case_label));
  }
  if (s.run.filter && !s.barrier) invalid("run.case", "case needs a barrier block");
  if (s.run.disturbance && !s.disturbance) invalid("run.case", "case needs a disturbance block");
  s.run.case_label = case_label;
}

BarrierConfig barrier_config(const Scenario& s) {
  if (!s.barrier) invalid("barrier", "scenario has no barrier block");
  const BarrierSettings& b = *s.barrier;
  const double xi = b.xi ? *b.xi : estimate_xi(s.cells, b.delta).xi_hat;
  BarrierConfig config(s.cells, b.delta, xi);
  config.alpha_gain = b.alpha_gain;
  config.beta_gain = b.beta_gain;
  config.chi = b.chi;
  return config;
}

CellSequence plan(const Scenario& s) {
  return plan_sequence(CellGraph(s.cells), s.cells, s.start, s.goal);
}

TimedTrajectory reference_trajectory(const Scenario& s) {
  return TimedTrajectory(build_multicell(plan(s), s.cells), s.settling_time);
}

StopAndGoTrajectory baseline_trajectory(const Scenario& s) {
  return baseline_stop_and_go(plan(s), s.cells, s.settling_time);
}

SimulationSetup make_simulation(const Scenario& s) {
  auto trajectory = std::make_shared<const TimedTrajectory>(reference_trajectory(s));
  SimulationSetup setup{
      .body = RigidBody(s.inertia),
      .gains = s.gains,
      .reference = [trajectory](double t) { return trajectory->evaluate(t); },
      .initial = EmbeddedState::from(s.start, Vector3::Zero()),
      .barrier = std::nullopt,
      .disturbance = std::nullopt,
  };
  if (s.barrier) setup.barrier = barrier_config(s);
  if (s.run.disturbance) setup.disturbance = s.disturbance;
  setup.filter_enabled = s.run.filter;
  setup.dt = s.run.dt;
  setup.t_end = s.run.t_end;
  return setup;
}

}  // namespace geo_attitude
