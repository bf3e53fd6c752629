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

#ifndef STCORRIDOR_COMMON_H_
#define STCORRIDOR_COMMON_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stcorridor {

// Categories of failures raised by the planning pipeline.
enum class ErrorKind {
  kParse,
  kValidation,
  kNoReference,
  kNoCorridor,
  kDegenerateInput,
  kOutOfRange,
  kNotApplicable,
  kMissingMode,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// Exception type used across the library. `field` is set for validation
// errors and names the offending scenario field (e.g. "ego.vs").
class PlannerError : public std::runtime_error {
 public:
  PlannerError(ErrorKind kind, const std::string& message,
               std::string field = {});

  ErrorKind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double Length() const { return hi - lo; }
  bool Contains(double x, double tol = 0.0) const {
    return x >= lo - tol && x <= hi + tol;
  }
};

}  // namespace stcorridor

#endif  // STCORRIDOR_COMMON_H_
