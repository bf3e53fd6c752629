// Copyright 2026 The stcorridor Authors
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

#include "stcorridor/common.h"

#include <utility>

namespace stcorridor {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kNoReference:
      return "no-reference-found";
    case ErrorKind::kNoCorridor:
      return "no-corridor";
    case ErrorKind::kDegenerateInput:
      return "degenerate-input";
    case ErrorKind::kOutOfRange:
      return "out-of-range";
    case ErrorKind::kNotApplicable:
      return "not-applicable";
    case ErrorKind::kMissingMode:
      return "missing-mode";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

PlannerError::PlannerError(ErrorKind kind, const std::string& message,
                           std::string field)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
      kind_(kind),
      field_(std::move(field)) {}

}  // namespace stcorridor
