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

#include "stcorridor/corridor.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "stcorridor/common.h"

namespace stcorridor {
namespace {

constexpr double kKnotTolerance = 1e-9;

void SetDuration(ConvexRegion& region, double dt) {
  region.t = (region.t_end - region.t_beg) * dt;
}

}  // namespace

bool CorridorSequence::AllFeasible() const {
  return std::all_of(regions.begin(), regions.end(),
                     [](const ConvexRegion& r) { return r.feasible; });
}

int CorridorSequence::RegionAt(double t) const {
  for (int k = 0; k < size(); ++k) {
    if (t <= EndTime(k) + kKnotTolerance) return k;
  }
  return size() - 1;
}

bool CorridorSequence::Contains(double t, double s, double l,
                                double tol) const {
  if (regions.empty()) return false;
  if (t < StartTime(0) - kKnotTolerance ||
      t > EndTime(size() - 1) + kKnotTolerance) {
    return false;
  }
  const int k = RegionAt(t);
  const ConvexRegion& r = regions[k];
  const double offset = t - StartTime(k);
  return s >= r.LowerAt(offset) - tol && s <= r.UpperAt(offset) + tol &&
         l >= r.l_beg - tol && l <= r.l_end + tol;
}

ConvexRegion SingleRegionCalculate(int i, std::span<const double> lb_s,
                                   std::span<const double> ub_s, double lb_l,
                                   double ub_l, double dt) {
  ConvexRegion region;
  region.t_beg = i;
  region.t_end = i + 1;
  region.t = dt;
  region.lskew = (lb_s[i + 1] - lb_s[i]) / dt;
  region.lbias = lb_s[i];
  region.uskew = (ub_s[i + 1] - ub_s[i]) / dt;
  region.ubias = ub_s[i];
  region.l_beg = lb_l;
  region.l_end = ub_l;
  return region;
}

std::vector<ConvexRegion> MergeMetaPieces(std::span<const double> lb_s,
                                          std::span<const double> ub_s,
                                          double lb_l, double ub_l, double dt,
                                          const CorridorOptions& options,
                                          int index_offset) {
  const int nums = static_cast<int>(lb_s.size());
  if (nums < 2 || ub_s.size() != lb_s.size()) {
    throw PlannerError(ErrorKind::kDegenerateInput,
                       "convexification needs at least two samples, got " +
                           std::to_string(nums));
  }
  std::vector<ConvexRegion> regions;
  regions.push_back(SingleRegionCalculate(0, lb_s, ub_s, lb_l, ub_l, dt));
  for (int i = 2; i < nums; ++i) {
    const double lskew = (lb_s[i] - lb_s[i - 1]) / dt;
    const double uskew = (ub_s[i] - ub_s[i - 1]) / dt;
    ConvexRegion& last = regions.back();
    if (std::abs(lskew - last.lskew) > options.skew_epsilon ||
        std::abs(uskew - last.uskew) > options.skew_epsilon) {
      last.t_end = i - 1;
      SetDuration(last, dt);
      regions.push_back(
          SingleRegionCalculate(i - 1, lb_s, ub_s, lb_l, ub_l, dt));
    }
  }
  regions.back().t_end = nums - 1;
  SetDuration(regions.back(), dt);
  for (auto& r : regions) {
    r.t_beg += index_offset;
    r.t_end += index_offset;
  }
  return regions;
}

std::vector<ConvexRegion> RegionSplit(std::span<const ConvexRegion> regions,
                                      double threshold, double dt) {
  std::vector<ConvexRegion> out;
  for (const auto& r : regions) {
    const int parts =
        r.t > threshold * (1.0 + 1e-9)
            ? static_cast<int>(std::ceil(r.t / threshold - 1e-9))
            : 1;
    const double width = (r.t_end - r.t_beg) / parts;
    for (int p = 0; p < parts; ++p) {
      const double beg = r.t_beg + p * width;
      const double end = p + 1 == parts ? r.t_end : beg + width;
      out.push_back(CutRegion(r, beg, end, dt));
    }
  }
  return out;
}

std::vector<ConvexRegion> Convexify2D(std::span<const double> lb_s,
                                      std::span<const double> ub_s,
                                      double lb_l, double ub_l, double dt,
                                      const CorridorOptions& options,
                                      int index_offset) {
  const auto merged =
      MergeMetaPieces(lb_s, ub_s, lb_l, ub_l, dt, options, index_offset);
  return RegionSplit(merged, options.split_threshold, dt);
}

ConvexRegion CutRegion(const ConvexRegion& region, double t_beg, double t_end,
                       double dt) {
  ConvexRegion out = region;
  const double offset = (t_beg - region.t_beg) * dt;
  out.lbias = region.LowerAt(offset);
  out.ubias = region.UpperAt(offset);
  out.t_beg = t_beg;
  out.t_end = t_end;
  SetDuration(out, dt);
  return out;
}

CorridorSequence GenerateRegions3D(const Scenario& sc,
                                   std::span<const LSlice> slices,
                                   const ReferenceTrajectory& ref,
                                   const CorridorOptions& options) {
  const int nums = sc.NumSamples();
  if (nums < 2 || ref.size() != nums) {
    throw PlannerError(ErrorKind::kDegenerateInput,
                       "reference does not match the sampling grid");
  }
  const int num_slices = static_cast<int>(slices.size());

  // Slice holding each reference waypoint ([l_beg, l_end), last one closed).
  std::vector<int> selected(nums, -1);
  for (int i = 0; i < nums; ++i) {
    for (int k = 0; k < num_slices; ++k) {
      const bool last = k + 1 == num_slices;
      if (ref.l[i] >= slices[k].l_beg &&
          (ref.l[i] < slices[k].l_end || (last && ref.l[i] <= slices[k].l_end))) {
        selected[i] = k;
        break;
      }
    }
    if (selected[i] < 0) {
      throw PlannerError(ErrorKind::kNoCorridor,
                         "reference leaves the road at t = " +
                             std::to_string(ref.t[i]));
    }
  }

  auto usable = [&](int k, int i) {
    const LSlice& s = slices[k];
    return !s.blocked[i] && !s.blocked[i + 1] && s.consistent[i];
  };

  // Candidate corridors per slice: convexify every maximal run of usable
  // meta-pieces.
  std::vector<std::vector<ConvexRegion>> candidates(num_slices);
  for (int k = 0; k < num_slices; ++k) {
    const LSlice& s = slices[k];
    int i = 0;
    while (i + 1 < nums) {
      if (!usable(k, i)) {
        ++i;
        continue;
      }
      int j = i;
      while (j + 1 < nums && usable(k, j)) ++j;
      const std::span<const double> lb(s.lb_s.data() + i, j - i + 1);
      const std::span<const double> ub(s.ub_s.data() + i, j - i + 1);
      auto regions = Convexify2D(lb, ub, s.l_beg, s.l_end, sc.dt, options, i);
      candidates[k].insert(candidates[k].end(), regions.begin(), regions.end());
      i = j;
    }
  }

  // Each meta-piece goes to the slice of its starting waypoint, or of its end
  // waypoint when the former is unusable there.
  std::vector<int> owner(nums - 1, -1);
  for (int i = 0; i + 1 < nums; ++i) {
    if (usable(selected[i], i)) {
      owner[i] = selected[i];
    } else if (usable(selected[i + 1], i)) {
      owner[i] = selected[i + 1];
    } else {
      throw PlannerError(ErrorKind::kNoCorridor,
                         "reference crosses a blocked slice near t = " +
                             std::to_string(ref.t[i]));
    }
  }

  CorridorSequence seq;
  seq.dt = sc.dt;
  int a = 0;
  while (a + 1 < nums) {
    int b = a + 1;
    while (b + 1 < nums && owner[b] == owner[a]) ++b;
    for (const auto& r : candidates[owner[a]]) {
      const double beg = std::max<double>(a, r.t_beg);
      const double end = std::min<double>(b, r.t_end);
      if (end - beg > kKnotTolerance) {
        seq.regions.push_back(CutRegion(r, beg, end, sc.dt));
      }
    }
    a = b;
  }

  for (int k = 0; k + 1 < seq.size(); ++k) {
    const ConvexRegion& r = seq.regions[k];
    const ConvexRegion& n = seq.regions[k + 1];
    const bool l_overlap = std::max(r.l_beg, n.l_beg) <= std::min(r.l_end, n.l_end);
    const double lo = std::max(r.LowerAt(r.t), n.lbias);
    const double hi = std::min(r.UpperAt(r.t), n.ubias);
    if (!l_overlap || lo > hi + 1e-9) {
      throw PlannerError(ErrorKind::kNoCorridor,
                         "consecutive corridors do not overlap at t = " +
                             std::to_string(seq.EndTime(k)));
    }
  }
  return seq;
}

ConvexRegion InscribeCuboid(const ConvexRegion& region) {
  ConvexRegion box = region;
  box.lbias = region.lbias + region.t * std::max(0.0, region.lskew);
  box.ubias = region.ubias + region.t * std::min(0.0, region.uskew);
  box.lskew = 0.0;
  box.uskew = 0.0;
  box.feasible = region.feasible && box.lbias <= box.ubias;
  return box;
}

CorridorSequence InscribeCuboids(const CorridorSequence& seq) {
  CorridorSequence out;
  out.dt = seq.dt;
  out.regions.reserve(seq.regions.size());
  for (const auto& r : seq.regions) out.regions.push_back(InscribeCuboid(r));
  return out;
}

}  // namespace stcorridor
