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

// Scenario data model and the JSON scenario file format. All quantities are
// SI and expressed directly in the Frenet frame (s along the road, l lateral).

#ifndef STCORRIDOR_SCENARIO_H_
#define STCORRIDOR_SCENARIO_H_

#include <string>
#include <string_view>
#include <vector>

namespace stcorridor {

struct EgoState {
  double s = 0.0;
  double l = 0.0;
  double vs = 0.0;
  double vl = 0.0;
  double as = 0.0;
  double al = 0.0;

  bool operator==(const EgoState&) const = default;
};

enum class ObstacleKind {
  kStatic,
  kLongitudinal,
  kLongitudinalLateral,
};

std::string_view ObstacleKindName(ObstacleKind kind);

// Constant-velocity prediction of one traffic participant. (s, l) is the
// footprint center at t = 0.
struct ObstaclePrediction {
  ObstacleKind kind = ObstacleKind::kStatic;
  double length = 0.0;
  double width = 0.0;
  double s = 0.0;
  double l = 0.0;
  double vs = 0.0;
  double vl = 0.0;

  bool operator==(const ObstaclePrediction&) const = default;
};

struct CurvatureSegment {
  double s_from = 0.0;
  double s_to = 0.0;
  double kappa = 0.0;

  bool operator==(const CurvatureSegment&) const = default;
};

struct RoadSpec {
  double s_min = 0.0;
  double s_max = 0.0;
  double l_min = 0.0;
  double l_max = 0.0;
  double speed_limit = 0.0;
  std::vector<CurvatureSegment> curvature;

  // Largest curvature of any segment overlapping [s_from, s_to]; 0 when no
  // segment overlaps.
  double MaxCurvature(double s_from, double s_to) const;

  bool operator==(const RoadSpec&) const = default;
};

struct GoalRegion {
  double s_min = 0.0;
  double s_max = 0.0;
  double l_min = 0.0;
  double l_max = 0.0;

  bool operator==(const GoalRegion&) const = default;
};

struct Scenario {
  EgoState ego;
  RoadSpec road;
  std::vector<ObstaclePrediction> obstacles;
  double horizon = 0.0;
  double dt = 0.0;
  GoalRegion goal;

  // Number of time samples, horizon / dt + 1.
  int NumSamples() const;
  double TimeAt(int i) const { return i * dt; }

  bool operator==(const Scenario&) const = default;
};

// Time-indexed reference samples on the scenario grid t_i = i * dt. Between
// samples the reference is linear; vs[i] / vl[i] hold the slope of segment
// [t_i, t_{i+1}] (the last entry repeats the final segment's slope).
struct ReferenceTrajectory {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> s;
  std::vector<double> l;
  std::vector<double> vs;
  std::vector<double> vl;

  int size() const { return static_cast<int>(t.size()); }
  double Horizon() const { return t.empty() ? 0.0 : t.back(); }

  // Piecewise-linear interpolation, clamped to [0, horizon].
  double SAt(double time) const;
  double LAt(double time) const;
  // Segment slopes; at a sample time the segment starting there is used.
  double VsAt(double time) const;
  double VlAt(double time) const;

 private:
  int SegmentAt(double time) const;
};

// Checks every invariant of the data model and throws a validation
// PlannerError naming the first offending field.
void ValidateScenario(const Scenario& scenario);

// Parses and validates a scenario document. Unknown keys are rejected.
Scenario ParseScenario(std::string_view json_text);

// Reads and parses a scenario file.
Scenario LoadScenario(const std::string& path);

// Serializes to the scenario file format (pretty-printed JSON).
std::string SerializeScenario(const Scenario& scenario);

}  // namespace stcorridor

#endif  // STCORRIDOR_SCENARIO_H_
