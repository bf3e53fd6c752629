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

// Obstacle occupancy in S-L-T space and its slicing along L.
//
// Each predicted obstacle becomes a parallelepiped: an (s, l) rectangle at
// t = 0 translated with constant velocity. Obstacles moving laterally are
// over-approximated by a volume with no lateral motion, after which the free
// space can be cut along L at obstacle edges into slices whose S-T
// cross-section is constant across the slice.

#ifndef STCORRIDOR_SLTGRAPH_H_
#define STCORRIDOR_SLTGRAPH_H_

#include <span>
#include <vector>

#include "stcorridor/common.h"
#include "stcorridor/scenario.h"

namespace stcorridor {

// Safety margins baked into the occupancy volumes.
struct MarginConfig {
  // The S-extent of every obstacle grows by half of this on both sides.
  double ego_length = 4.6;
  // Added to both lateral sides of every obstacle.
  double lateral_margin = 0.2;
};

struct SltObstacle {
  double s_lo = 0.0;  // at t = 0, margins included
  double s_hi = 0.0;
  double l_lo = 0.0;
  double l_hi = 0.0;
  double ds_dt = 0.0;
  double dl_dt = 0.0;
  int zero_slope_faces = 6;  // 6, 4 or 2

  Interval SRange(double t) const { return {s_lo + ds_dt * t, s_hi + ds_dt * t}; }
  Interval LRange(double t) const { return {l_lo + dl_dt * t, l_hi + dl_dt * t}; }

  // True when (s, l) is in the open interior of the footprint at time t;
  // touching a face does not count as a collision.
  bool Occupies(double t, double s, double l) const;
};

// Converts a prediction into its margin-inflated occupancy volume.
SltObstacle ToSltObstacle(const ObstaclePrediction& prediction,
                          const MarginConfig& margins);

// Replaces a 2-zero-slope-face volume by a 4-face one that covers the swept
// lateral range over [0, horizon]. Other volumes are returned unchanged.
SltObstacle OverApproximate(const SltObstacle& obstacle, double horizon);

enum class FaceSelection { kLateralFaces, kLongitudinalFaces };

// Which pair of sloped faces is flattened for a 2-face obstacle: the lateral
// faces when lateral speed is below longitudinal speed, the longitudinal ones
// otherwise (ties included). Throws kNotApplicable for 4- and 6-face inputs.
FaceSelection SelectFaces(const SltObstacle& obstacle);

// Volume added by flattening the selected faces over [0, horizon].
double OverApproximationLoss(const SltObstacle& obstacle,
                             FaceSelection faces, double horizon);

// Projects, over-approximates and filters the scenario obstacles. Volumes
// that never intersect the road window over [0, horizon] are dropped.
std::vector<SltObstacle> BuildOccupancy(const Scenario& scenario,
                                        const MarginConfig& margins);

bool IsFree(std::span<const SltObstacle> obstacles, double t, double s,
            double l);

struct LSlice {
  int id = 0;
  double l_beg = 0.0;
  double l_end = 0.0;
  // Indices into the occupancy list of obstacles overlapping this slice.
  std::vector<int> obstacles;
  // Free S-interval containing the reference at each time sample.
  std::vector<double> lb_s;
  std::vector<double> ub_s;
  // blocked[i]: the reference s at t_i is inside an obstacle of this slice
  // (lb_s/ub_s are meaningless there).
  std::vector<bool> blocked;
  // consistent[i]: every obstacle of this slice stays on the same side of the
  // reference over [t_i, t_{i+1}], so the bounds may be interpolated linearly
  // across that meta-piece. Size nums - 1.
  std::vector<bool> consistent;

  bool Feasible() const;
  bool ContainsL(double l) const { return l >= l_beg && l <= l_end; }
};

// Sorted distinct obstacle L-edges clipped to the road, plus the road bounds.
// Edges closer than 1e-6 m are merged.
std::vector<double> SliceBoundaries(const Scenario& scenario,
                                    std::span<const SltObstacle> obstacles);

// Index of the slice whose half-open range [l_beg, l_end) contains l (the
// last slice is closed); -1 outside the road.
int SliceIndexAt(std::span<const double> boundaries, double l);

// True when an obstacle's L-range overlaps the open slice (l_beg, l_end).
bool OverlapsSlice(const SltObstacle& obstacle, double l_beg, double l_end);

// Free S-interval at time t that contains s_query, considering only the
// listed obstacles and the road's S extent. Returns false when s_query is
// blocked.
bool FreeSInterval(std::span<const SltObstacle> obstacles,
                   std::span<const int> subset, const RoadSpec& road, double t,
                   double s_query, Interval* free);

// Slices the road along L and samples per-slice S-bounds around the
// reference on the time grid. Requires obstacles with no lateral motion.
std::vector<LSlice> BuildSlices(const Scenario& scenario,
                                std::span<const SltObstacle> obstacles,
                                const ReferenceTrajectory& reference);

}  // namespace stcorridor

#endif  // STCORRIDOR_SLTGRAPH_H_
