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

#ifndef STCORRIDOR_REFERENCE_H_
#define STCORRIDOR_REFERENCE_H_

#include <span>

#include "stcorridor/scenario.h"
#include "stcorridor/sltgraph.h"

namespace stcorridor {

struct ReferenceOptions {
  MarginConfig margins;
  // Lateral speed of a lane-change ramp when the ego starts without lateral
  // motion toward the target (m/s).
  double lateral_rate = 1.0;
  // Lookahead used to fold the initial lateral acceleration into the ramp
  // rate when the ego already moves toward the target (s).
  double lateral_lookahead = 0.5;
  // Number of candidate end positions sampled over the goal S-range.
  int speed_samples = 41;
  // Spacing of candidate lateral detour offsets for out-and-back maneuvers.
  double detour_step = 0.5;
};

// Checks the reference against the occupancy: every waypoint free and on the
// road, consecutive waypoints in the same or adjacent slices, each obstacle of
// those slices on the same side of the reference at both ends of every
// sampling segment, and the final waypoint inside the goal region.
bool IsValidReference(const Scenario& scenario,
                      std::span<const SltObstacle> obstacles,
                      const ReferenceTrajectory& reference);

// Builds a piecewise-linear reference on the sampling grid.
//
// Longitudinal: one constant speed chosen from end positions spread over the
// goal S-range, closest to the ego's initial speed first. Lateral: straight
// when the goal L-center equals the start, otherwise a single constant-rate
// ramp started at the latest valid time (or immediately, faster, when the ego
// already moves toward the target); when a straight run is blocked, an
// out-and-back detour. Throws kNoReference when no candidate is valid.
ReferenceTrajectory GenerateReference(const Scenario& scenario,
                                      const ReferenceOptions& options = {});

}  // namespace stcorridor

#endif  // STCORRIDOR_REFERENCE_H_
