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

#include <stdexcept>
#include <string>
#include <string_view>

namespace geo_attitude {

enum class ErrorCode {
  kAngleAtPi,         // log/geodesic requested for a rotation angle at pi
  kSingularOperator,  // Upsilon operator not invertible
  kOutOfCell,         // curve endpoint outside its cell
  kNotCovered,        // start or goal attitude in no cell
  kDisconnected,      // no cell path between start and goal
  kNonPositive,       // singular-set estimate of xi is <= 0
  kInfeasibleState,   // safety constraint cannot be met (state left C_b n C_b1)
  kAdmissionFailed,   // initial state violates b > 0 or b1 > 0
  kParseError,
  kValidationError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geo_attitude
