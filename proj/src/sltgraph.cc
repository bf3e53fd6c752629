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

#include "stcorridor/sltgraph.h"

#include <algorithm>
#include <cmath>

namespace stcorridor {
namespace {

constexpr double kEdgeMergeTolerance = 1e-6;

}  // namespace

bool SltObstacle::Occupies(double t, double s, double l) const {
  const Interval sr = SRange(t);
  const Interval lr = LRange(t);
  return s > sr.lo && s < sr.hi && l > lr.lo && l < lr.hi;
}

SltObstacle ToSltObstacle(const ObstaclePrediction& p,
                          const MarginConfig& margins) {
  SltObstacle o;
  const double half_s = 0.5 * p.length + 0.5 * margins.ego_length;
  const double half_l = 0.5 * p.width + margins.lateral_margin;
  o.s_lo = p.s - half_s;
  o.s_hi = p.s + half_s;
  o.l_lo = p.l - half_l;
  o.l_hi = p.l + half_l;
  o.ds_dt = p.vs;
  o.dl_dt = p.vl;
  switch (p.kind) {
    case ObstacleKind::kStatic:
      o.zero_slope_faces = 6;
      break;
    case ObstacleKind::kLongitudinal:
      o.zero_slope_faces = 4;
      break;
    case ObstacleKind::kLongitudinalLateral:
      o.zero_slope_faces = 2;
      break;
  }
  return o;
}

SltObstacle OverApproximate(const SltObstacle& o, double horizon) {
  if (o.zero_slope_faces != 2) return o;
  SltObstacle out = o;
  const double sweep = o.dl_dt * horizon;
  out.l_lo = o.l_lo + std::min(0.0, sweep);
  out.l_hi = o.l_hi + std::max(0.0, sweep);
  out.dl_dt = 0.0;
  out.zero_slope_faces = 4;
  return out;
}

FaceSelection SelectFaces(const SltObstacle& o) {
  if (o.zero_slope_faces != 2) {
    throw PlannerError(ErrorKind::kNotApplicable,
                       "face selection needs a 2-zero-slope-face obstacle");
  }
  return std::abs(o.dl_dt) < std::abs(o.ds_dt)
             ? FaceSelection::kLateralFaces
             : FaceSelection::kLongitudinalFaces;
}

double OverApproximationLoss(const SltObstacle& o, FaceSelection faces,
                             double horizon) {
  // A sheared prism keeps its base area, so flattening one pair of faces adds
  // the swept extent times the orthogonal side, integrated over time.
  const double t2 = horizon * horizon;
  if (faces == FaceSelection::kLateralFaces) {
    return (o.s_hi - o.s_lo) * std::abs(o.dl_dt) * t2;
  }
  return (o.l_hi - o.l_lo) * std::abs(o.ds_dt) * t2;
}

std::vector<SltObstacle> BuildOccupancy(const Scenario& sc,
                                        const MarginConfig& margins) {
  std::vector<SltObstacle> out;
  out.reserve(sc.obstacles.size());
  const double horizon = sc.horizon;
  for (const auto& p : sc.obstacles) {
    const SltObstacle o = OverApproximate(ToSltObstacle(p, margins), horizon);
    if (o.l_hi <= sc.road.l_min || o.l_lo >= sc.road.l_max) continue;
    const Interval s0 = o.SRange(0.0);
    const Interval s1 = o.SRange(horizon);
    const double s_lo = std::min(s0.lo, s1.lo);
    const double s_hi = std::max(s0.hi, s1.hi);
    if (s_hi <= sc.road.s_min || s_lo >= sc.road.s_max) continue;
    out.push_back(o);
  }
  return out;
}

bool IsFree(std::span<const SltObstacle> obstacles, double t, double s,
            double l) {
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const SltObstacle& o) { return o.Occupies(t, s, l); });
}

bool LSlice::Feasible() const {
  return std::none_of(blocked.begin(), blocked.end(), [](bool b) { return b; });
}

std::vector<double> SliceBoundaries(const Scenario& sc,
                                    std::span<const SltObstacle> obstacles) {
  std::vector<double> edges = {sc.road.l_min, sc.road.l_max};
  for (const auto& o : obstacles) {
    for (double e : {o.l_lo, o.l_hi}) {
      if (e > sc.road.l_min && e < sc.road.l_max) edges.push_back(e);
    }
  }
  std::sort(edges.begin(), edges.end());
  std::vector<double> merged;
  for (double e : edges) {
    if (merged.empty() || e - merged.back() > kEdgeMergeTolerance) {
      merged.push_back(e);
    }
  }
  // Keep the road bound exact when an obstacle edge merged into it.
  merged.back() = sc.road.l_max;
  merged.front() = sc.road.l_min;
  return merged;
}

int SliceIndexAt(std::span<const double> boundaries, double l) {
  const int count = static_cast<int>(boundaries.size()) - 1;
  if (count < 1 || l < boundaries.front() || l > boundaries.back()) return -1;
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), l);
  const int idx = static_cast<int>(it - boundaries.begin()) - 1;
  return std::min(idx, count - 1);
}

bool OverlapsSlice(const SltObstacle& o, double l_beg, double l_end) {
  return o.l_lo < l_end - kEdgeMergeTolerance &&
         o.l_hi > l_beg + kEdgeMergeTolerance;
}

bool FreeSInterval(std::span<const SltObstacle> obstacles,
                   std::span<const int> subset, const RoadSpec& road, double t,
                   double s_query, Interval* free) {
  if (s_query < road.s_min || s_query > road.s_max) return false;
  double lb = road.s_min;
  double ub = road.s_max;
  for (int idx : subset) {
    const Interval r = obstacles[idx].SRange(t);
    if (r.hi <= s_query) {
      lb = std::max(lb, r.hi);
    } else if (r.lo >= s_query) {
      ub = std::min(ub, r.lo);
    } else {
      return false;
    }
  }
  if (!(lb < ub)) return false;
  *free = {lb, ub};
  return true;
}

std::vector<LSlice> BuildSlices(const Scenario& sc,
                                std::span<const SltObstacle> obstacles,
                                const ReferenceTrajectory& ref) {
  for (const auto& o : obstacles) {
    if (o.dl_dt != 0.0) {
      throw PlannerError(ErrorKind::kDegenerateInput,
                         "slicing requires over-approximated obstacles");
    }
  }
  const std::vector<double> edges = SliceBoundaries(sc, obstacles);
  const int nums = sc.NumSamples();
  std::vector<LSlice> slices;
  for (size_t k = 0; k + 1 < edges.size(); ++k) {
    LSlice slice;
    slice.id = static_cast<int>(k);
    slice.l_beg = edges[k];
    slice.l_end = edges[k + 1];
    for (size_t j = 0; j < obstacles.size(); ++j) {
      if (OverlapsSlice(obstacles[j], slice.l_beg, slice.l_end)) {
        slice.obstacles.push_back(static_cast<int>(j));
      }
    }
    slice.lb_s.assign(nums, 0.0);
    slice.ub_s.assign(nums, 0.0);
    slice.blocked.assign(nums, false);
    for (int i = 0; i < nums; ++i) {
      Interval free;
      if (FreeSInterval(obstacles, slice.obstacles, sc.road, sc.TimeAt(i),
                        ref.s[i], &free)) {
        slice.lb_s[i] = free.lo;
        slice.ub_s[i] = free.hi;
      } else {
        slice.blocked[i] = true;
      }
    }
    slice.consistent.assign(std::max(nums - 1, 0), true);
    for (int i = 0; i + 1 < nums; ++i) {
      for (int j : slice.obstacles) {
        const Interval a = obstacles[j].SRange(sc.TimeAt(i));
        const Interval b = obstacles[j].SRange(sc.TimeAt(i + 1));
        const bool below = a.hi <= ref.s[i] && b.hi <= ref.s[i + 1];
        const bool above = a.lo >= ref.s[i] && b.lo >= ref.s[i + 1];
        if (!below && !above) {
          slice.consistent[i] = false;
          break;
        }
      }
    }
    slices.push_back(std::move(slice));
  }
  return slices;
}

}  // namespace stcorridor
