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

// Batch runs over a scenario file, sampled exports and mode comparison.

#ifndef STCORRIDOR_REPORT_H_
#define STCORRIDOR_REPORT_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stcorridor/planner.h"

namespace stcorridor {

enum class RunMode { kTrapezoidal, kCuboidal, kBoth };

// Accepts trap, cub, both and the long mode names.
RunMode ParseRunMode(std::string_view name);

struct RunConfig {
  std::string scenario_path;
  RunMode mode = RunMode::kBoth;
  std::string output_dir = ".";
  double rate_hz = 100.0;
  PlannerConfig planner;
  bool dump_slices = false;
  bool dump_corridors = false;
  bool dump_qp = false;

  void Validate() const;
};

// Applies "w1=0.5,w4=2" style overrides. Throws kParse on malformed input.
void ApplyWeightOverrides(std::string_view spec, Weights* weights);
// Keys: vs_min vs_max as_min as_max js_min js_max vl_min vl_max al_min
// al_max jl_min jl_max a_cm.
void ApplyLimitOverrides(std::string_view spec, PhysicalLimits* limits);
// Keys: ego_length lateral_margin.
void ApplyMarginOverrides(std::string_view spec, MarginConfig* margins);

// One exported sample: t, s, l, vs, vl, as, al, js, jl.
using TrajectorySample = std::array<double, 9>;

// Uniform samples at the given rate over [0, horizon], including both ends.
std::vector<TrajectorySample> SampleTrajectory(
    const PiecewiseBezierTrajectory& trajectory, double rate_hz);

// CSV text with the header t,s,l,vs,vl,as,al,js,jl.
std::string TrajectoryCsv(const std::vector<TrajectorySample>& samples);
std::string SlicesCsv(const Scenario& scenario,
                      const std::vector<LSlice>& slices);
std::string CorridorsJson(const CorridorSequence& corridors);
// Sparse triplet dump: "Q row col val", "Aeq row col val", "Aie row col val"
// lines followed by the vectors "q", "beq", "bie" and "const".
std::string QpDump(const QpProblem& problem);

struct ModeReport {
  CorridorMode mode = CorridorMode::kTrapezoidal;
  QpStatus status = QpStatus::kSolverLimit;
  double objective = 0.0;
  double solve_time_ms = 0.0;
  double pipeline_time_ms = 0.0;
  int corridor_count = 0;
  // Maxima over the exported samples; zero when no trajectory exists.
  double max_abs_as = 0.0;
  double max_abs_al = 0.0;
  double max_vs = 0.0;
  std::optional<ConstraintFamily> violated_family;
  std::optional<PiecewiseBezierTrajectory> trajectory;
  std::vector<TrajectorySample> samples;
};

struct RunReport {
  std::vector<ModeReport> modes;

  const ModeReport* Find(CorridorMode mode) const;
  // 0 when every mode is optimal, 2 when some mode is infeasible, 1 for a
  // solver limit.
  int ExitCode() const;
};

// Runs the pipeline and writes trajectory_<mode>.csv plus requested dumps
// into the output directory. Errors carry the failing stage in the message.
RunReport Run(const RunConfig& config);

// Same, for an in-memory scenario and without writing files.
RunReport RunScenario(const Scenario& scenario, RunMode mode,
                      const PlannerConfig& planner, double rate_hz = 100.0);

// Side-by-side table of both modes. Throws kMissingMode unless the report
// holds both.
std::string Compare(const RunReport& report);

// One line per mode, used by the command-line tool.
std::string Summary(const RunReport& report);

}  // namespace stcorridor

#endif  // STCORRIDOR_REPORT_H_
