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

#include "geo_attitude/export.hpp"

#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

namespace geo_attitude {

namespace {

// Twelve significant digits; logs are for plotting, not exact replay.
constexpr int kCsvPrecision = 12;

void put_matrix(std::ostream& out, const Matrix3& m) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out << ',' << m(r, c);
  }
}

void put_vector(std::ostream& out, const Vector3& v) { out << ',' << v.x() << ',' << v.y() << ',' << v.z(); }

// JSON has no NaN; runs without a barrier report null.
nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

}  // namespace

void write_log_csv(std::ostream& out, const TrajectoryLog& log, std::size_t every) {
  if (every == 0) every = 1;
  out << "t,r11,r12,r13,r21,r22,r23,r31,r32,r33,w1,w2,w3,unom1,unom2,unom3,u1,u2,u3,h,b,b1,track_err\n";
  const auto old_precision = out.precision(kCsvPrecision);
  for (std::size_t k = 0; k < log.rows.size(); k += every) {
    const LogRow& r = log.rows[k];
    out << r.t;
    put_matrix(out, r.attitude);
    put_vector(out, r.omega);
    put_vector(out, r.u_nom);
    put_vector(out, r.u);
    out << ',' << r.h << ',' << r.b << ',' << r.b1 << ',' << r.track_err << '\n';
  }
  out.precision(old_precision);
}

void write_reference_csv(std::ostream& out, std::span<const ReferenceSample> samples) {
  out << "t,r11,r12,r13,r21,r22,r23,r31,r32,r33,w1,w2,w3,dw1,dw2,dw3,speed\n";
  const auto old_precision = out.precision(kCsvPrecision);
  for (const ReferenceSample& s : samples) {
    out << s.t;
    put_matrix(out, s.state.attitude.matrix());
    put_vector(out, s.state.angular_velocity);
    put_vector(out, s.state.angular_acceleration);
    out << ',' << s.state.angular_velocity.norm() << '\n';
  }
  out.precision(old_precision);
}

std::string summary_json(const RunSummary& s, int case_label) {
  nlohmann::json j = {
      {"max_ref_speed", s.max_ref_speed},
      {"min_h", finite_or_null(s.min_h)},
      {"min_b", finite_or_null(s.min_b)},
      {"min_b1", finite_or_null(s.min_b1)},
      {"terminal_error", s.terminal_error},
      {"activation_count", s.activation_count},
      {"max_orthonormality_residual", s.max_orthonormality_residual},
      {"wall_time", s.wall_time},
  };
  if (case_label != 0) j["case"] = case_label;
  return j.dump(2) + "\n";
}

void write_margin_sweep_csv(std::ostream& out, std::span<const MarginSweepRow> rows) {
  out << "delta,retained_fraction\n";
  const auto old_precision = out.precision(kCsvPrecision);
  for (const MarginSweepRow& r : rows) out << r.delta << ',' << r.retained_fraction << '\n';
  out.precision(old_precision);
}

}  // namespace geo_attitude
