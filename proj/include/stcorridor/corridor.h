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

// Trapezoidal-prism safe corridors.
//
// A ConvexRegion bounds s between two lines in t (bias + skew * (t - T_k))
// and l between two constants over one time interval. Regions are built per
// L-slice by greedily merging sampled meta-pieces with equal slopes, split
// when too long, and chained along the reference.

#ifndef STCORRIDOR_CORRIDOR_H_
#define STCORRIDOR_CORRIDOR_H_

#include <span>
#include <vector>

#include "stcorridor/scenario.h"
#include "stcorridor/sltgraph.h"

namespace stcorridor {

struct CorridorOptions {
  // Slopes closer than this are merged into one region (m/s).
  double skew_epsilon = 1e-6;
  // Regions longer than this are split into equal parts (s).
  double split_threshold = 1.0;
};

struct ConvexRegion {
  // Interval in grid coordinates; fractional after an equal split.
  double t_beg = 0.0;
  double t_end = 0.0;
  double t = 0.0;  // duration h_k in seconds
  double lbias = 0.0;
  double lskew = 0.0;
  double ubias = 0.0;
  double uskew = 0.0;
  double l_beg = 0.0;
  double l_end = 0.0;
  // False for an inscribed cuboid whose lower bound exceeds its upper bound.
  bool feasible = true;

  // Bounds at `offset` seconds after the region start.
  double LowerAt(double offset) const { return lbias + lskew * offset; }
  double UpperAt(double offset) const { return ubias + uskew * offset; }
};

struct CorridorSequence {
  double dt = 0.0;
  std::vector<ConvexRegion> regions;

  int size() const { return static_cast<int>(regions.size()); }
  double StartTime(int k) const { return regions[k].t_beg * dt; }
  double EndTime(int k) const { return regions[k].t_end * dt; }
  bool AllFeasible() const;
  // Index of the region whose interval holds absolute time t (the earlier
  // one at a shared knot).
  int RegionAt(double t) const;
  // Whether (s, l) at absolute time t lies inside the corridor, up to tol.
  bool Contains(double t, double s, double l, double tol = 0.0) const;
};

// One region from meta-piece [i, i + 1].
ConvexRegion SingleRegionCalculate(int i, std::span<const double> lb_s,
                                   std::span<const double> ub_s, double lb_l,
                                   double ub_l, double dt);

// Greedy merge of consecutive meta-pieces without splitting. A region keeps
// the slopes of its first meta-piece and closes as soon as a later meta-piece
// differs from them by more than the skew tolerance. `index_offset` shifts
// the grid coordinates of the output (used for sub-ranges of a profile).
std::vector<ConvexRegion> MergeMetaPieces(std::span<const double> lb_s,
                                          std::span<const double> ub_s,
                                          double lb_l, double ub_l, double dt,
                                          const CorridorOptions& options,
                                          int index_offset = 0);

// Splits regions longer than the threshold into ceil(t / threshold) equal
// parts tracing the same bound lines.
std::vector<ConvexRegion> RegionSplit(std::span<const ConvexRegion> regions,
                                      double threshold, double dt);

// MergeMetaPieces followed by RegionSplit. Throws kDegenerateInput for fewer
// than two samples.
std::vector<ConvexRegion> Convexify2D(std::span<const double> lb_s,
                                      std::span<const double> ub_s,
                                      double lb_l, double ub_l, double dt,
                                      const CorridorOptions& options = {},
                                      int index_offset = 0);

// Cuts a region to [t_beg, t_end] (grid coordinates) and re-biases it.
ConvexRegion CutRegion(const ConvexRegion& region, double t_beg, double t_end,
                       double dt);

// Builds candidate corridors for every slice and chains the ones enclosing
// the reference into a contiguous sequence over [0, horizon]. Throws
// kNoCorridor when the reference crosses a blocked slice.
CorridorSequence GenerateRegions3D(const Scenario& scenario,
                                   std::span<const LSlice> slices,
                                   const ReferenceTrajectory& reference,
                                   const CorridorOptions& options = {});

// Replaces each region by the largest time-constant box inside it. Regions
// whose box is empty are kept and marked infeasible.
CorridorSequence InscribeCuboids(const CorridorSequence& sequence);
ConvexRegion InscribeCuboid(const ConvexRegion& region);

}  // namespace stcorridor

#endif  // STCORRIDOR_CORRIDOR_H_
