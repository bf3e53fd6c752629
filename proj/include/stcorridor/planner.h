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

// End-to-end planning: occupancy, reference, slices, corridors and the QP.

#ifndef STCORRIDOR_PLANNER_H_
#define STCORRIDOR_PLANNER_H_

#include <string>
#include <vector>

#include "stcorridor/corridor.h"
#include "stcorridor/qp_solver.h"
#include "stcorridor/qpopt.h"
#include "stcorridor/reference.h"
#include "stcorridor/scenario.h"
#include "stcorridor/sltgraph.h"

namespace stcorridor {

struct PlannerConfig {
  MarginConfig margins;
  ReferenceOptions reference;  // its margins are replaced by `margins`
  CorridorOptions corridor;
  Weights weights;
  PhysicalLimits limits;
  int order = kDefaultBezierOrder;
  QpSettings solver;
};

// Mode-independent intermediate results.
struct CorridorArtifacts {
  std::vector<SltObstacle> occupancy;
  ReferenceTrajectory reference;
  std::vector<LSlice> slices;
  CorridorSequence corridors;  // trapezoidal
  double build_time_ms = 0.0;
};

struct ModePlan {
  CorridorMode mode = CorridorMode::kTrapezoidal;
  // Corridors whose bounds the safety rows encode (inscribed cuboids in
  // cuboidal mode).
  CorridorSequence corridors;
  AssembledQp qp;
  PlanResult result;
  double assembly_time_ms = 0.0;
};

// Runs the geometric stages. Errors are rethrown with the failing stage
// ("sltgraph", "reference" or "corridor") prefixed to the message.
CorridorArtifacts BuildCorridorArtifacts(const Scenario& scenario,
                                         const PlannerConfig& config);

ModePlan PlanMode(const Scenario& scenario, const CorridorArtifacts& artifacts,
                  CorridorMode mode, const PlannerConfig& config);

// Convenience wrapper running both stages for one mode.
ModePlan Plan(const Scenario& scenario, CorridorMode mode,
              const PlannerConfig& config = {});

}  // namespace stcorridor

#endif  // STCORRIDOR_PLANNER_H_
