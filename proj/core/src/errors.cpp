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

#include "geo_attitude/errors.hpp"

namespace geo_attitude {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAngleAtPi: return "AngleAtPi";
    case ErrorCode::kSingularOperator: return "SingularOperator";
    case ErrorCode::kOutOfCell: return "OutOfCell";
    case ErrorCode::kNotCovered: return "NotCovered";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kNonPositive: return "NonPositive";
    case ErrorCode::kInfeasibleState: return "InfeasibleState";
    case ErrorCode::kAdmissionFailed: return "AdmissionFailed";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace geo_attitude
