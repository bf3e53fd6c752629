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

#include "stcorridor/reference.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include "stcorridor/common.h"

namespace stcorridor {
namespace {

constexpr double kLateralEpsilon = 1e-9;

// Piecewise-linear lateral profile, constant before the first and after the
// last knot.
struct LateralPlan {
  double l0 = 0.0;
  std::vector<std::pair<double, double>> knots;

  double At(double t) const {
    if (knots.empty() || t <= knots.front().first) {
      return knots.empty() ? l0 : knots.front().second;
    }
    for (size_t k = 0; k + 1 < knots.size(); ++k) {
      const auto [ta, la] = knots[k];
      const auto [tb, lb] = knots[k + 1];
      if (t <= tb) {
        return tb > ta ? la + (lb - la) * (t - ta) / (tb - ta) : lb;
      }
    }
    return knots.back().second;
  }
};

LateralPlan Straight(double l0) { return {l0, {}}; }

LateralPlan Ramp(double l0, double l1, double t_start, double rate) {
  const double duration = std::abs(l1 - l0) / rate;
  return {l0, {{t_start, l0}, {t_start + duration, l1}}};
}

LateralPlan OutAndBack(double l0, double offset, double t_out, double t_back,
                       double rate) {
  const double duration = std::abs(offset - l0) / rate;
  return {l0,
          {{t_out, l0},
           {t_out + duration, offset},
           {t_back, offset},
           {t_back + duration, l0}}};
}

ReferenceTrajectory Sample(const Scenario& sc, double speed,
                           const LateralPlan& plan) {
  const int nums = sc.NumSamples();
  ReferenceTrajectory ref;
  ref.dt = sc.dt;
  ref.t.resize(nums);
  ref.s.resize(nums);
  ref.l.resize(nums);
  ref.vs.assign(nums, speed);
  ref.vl.assign(nums, 0.0);
  for (int i = 0; i < nums; ++i) {
    const double t = sc.TimeAt(i);
    ref.t[i] = t;
    ref.s[i] = sc.ego.s + speed * t;
    ref.l[i] = plan.At(t);
  }
  for (int i = 0; i + 1 < nums; ++i) {
    ref.vl[i] = (ref.l[i + 1] - ref.l[i]) / sc.dt;
  }
  if (nums > 1) ref.vl[nums - 1] = ref.vl[nums - 2];
  return ref;
}

// -1: obstacle entirely behind s, +1: entirely ahead, 0: s inside its extent.
int SideOf(const SltObstacle& o, double t, double s) {
  const Interval r = o.SRange(t);
  if (r.hi <= s) return -1;
  if (r.lo >= s) return 1;
  return 0;
}

class ReferenceChecker {
 public:
  ReferenceChecker(const Scenario& sc, std::span<const SltObstacle> obstacles)
      : sc_(sc),
        obstacles_(obstacles),
        edges_(SliceBoundaries(sc, obstacles)) {
    for (size_t k = 0; k + 1 < edges_.size(); ++k) {
      std::vector<int> members;
      for (size_t j = 0; j < obstacles.size(); ++j) {
        if (OverlapsSlice(obstacles[j], edges_[k], edges_[k + 1])) {
          members.push_back(static_cast<int>(j));
        }
      }
      slice_members_.push_back(std::move(members));
    }
  }

  // Earliest sample index at which the reference breaks a rule (a waypoint,
  // or the segment starting there); -1 when valid. The goal is checked last
  // and reported at the final index.
  int FirstViolation(const ReferenceTrajectory& ref) const {
    const int nums = ref.size();
    const RoadSpec& road = sc_.road;
    for (int i = 0; i < nums; ++i) {
      const double t = ref.t[i];
      const double s = ref.s[i];
      const double l = ref.l[i];
      if (s < road.s_min || s > road.s_max || l < road.l_min ||
          l > road.l_max) {
        return i;
      }
      if (!IsFree(obstacles_, t, s, l)) return i;
      if (i + 1 == nums) break;
      const int a = SliceIndexAt(edges_, l);
      const int b = SliceIndexAt(edges_, ref.l[i + 1]);
      if (a < 0 || b < 0 || std::abs(a - b) > 1) return i;
      for (int slice : {a, b}) {
        for (int j : slice_members_[slice]) {
          const int before = SideOf(obstacles_[j], t, s);
          const int after = SideOf(obstacles_[j], ref.t[i + 1], ref.s[i + 1]);
          if (before == 0 || before != after) return i;
        }
      }
    }
    const GoalRegion& g = sc_.goal;
    const double s_end = ref.s.back();
    const double l_end = ref.l.back();
    if (s_end < g.s_min - kLateralEpsilon || s_end > g.s_max + kLateralEpsilon ||
        l_end < g.l_min - kLateralEpsilon || l_end > g.l_max + kLateralEpsilon) {
      return nums - 1;
    }
    return -1;
  }

 private:
  const Scenario& sc_;
  std::span<const SltObstacle> obstacles_;
  std::vector<double> edges_;
  std::vector<std::vector<int>> slice_members_;
};

std::vector<double> CandidateSpeeds(const Scenario& sc, int samples) {
  std::vector<double> speeds;
  const double lo = std::max(sc.goal.s_min, sc.road.s_min);
  const double hi = std::min(sc.goal.s_max, sc.road.s_max);
  if (lo > hi) return speeds;
  const int n = std::max(samples, 1);
  for (int k = 0; k < n; ++k) {
    const double s_end =
        n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (n - 1);
    const double v = (s_end - sc.ego.s) / sc.horizon;
    if (v >= 0.0 && v <= sc.road.speed_limit) speeds.push_back(v);
  }
  const double v0 = sc.ego.vs;
  std::stable_sort(speeds.begin(), speeds.end(), [v0](double a, double b) {
    return std::abs(a - v0) < std::abs(b - v0);
  });
  return speeds;
}

// Ramp start times on the grid, latest first.
std::vector<double> StartTimes(const Scenario& sc, double duration) {
  std::vector<double> times;
  const int last = static_cast<int>(
      std::floor((sc.horizon - duration) / sc.dt + 1e-9));
  for (int k = std::max(last, 0); k >= 0; --k) times.push_back(sc.TimeAt(k));
  return times;
}

}  // namespace

bool IsValidReference(const Scenario& sc,
                      std::span<const SltObstacle> obstacles,
                      const ReferenceTrajectory& ref) {
  if (ref.size() != sc.NumSamples()) return false;
  return ReferenceChecker(sc, obstacles).FirstViolation(ref) < 0;
}

ReferenceTrajectory GenerateReference(const Scenario& sc,
                                      const ReferenceOptions& options) {
  const std::vector<SltObstacle> obstacles =
      BuildOccupancy(sc, options.margins);
  const ReferenceChecker checker(sc, obstacles);
  const double l0 = sc.ego.l;
  const double l_goal = 0.5 * (sc.goal.l_min + sc.goal.l_max);
  const double delta_l = l_goal - l0;
  const double rate = options.lateral_rate;

  for (double speed : CandidateSpeeds(sc, options.speed_samples)) {
    if (std::abs(delta_l) <= kLateralEpsilon) {
      ReferenceTrajectory straight = Sample(sc, speed, Straight(l0));
      const int blocked_at = checker.FirstViolation(straight);
      if (blocked_at < 0) return straight;

      // Out-and-back detour around whatever blocks the straight run.
      std::vector<double> offsets;
      for (int k = 1;; ++k) {
        const double up = l0 + k * options.detour_step;
        const double down = l0 - k * options.detour_step;
        const bool up_ok = up <= sc.road.l_max;
        const bool down_ok = down >= sc.road.l_min;
        if (!up_ok && !down_ok) break;
        if (up_ok) offsets.push_back(up);
        if (down_ok) offsets.push_back(down);
      }
      for (double offset : offsets) {
        const double duration = std::abs(offset - l0) / rate;
        for (double t_out : StartTimes(sc, 2.0 * duration)) {
          if (t_out > sc.TimeAt(blocked_at)) continue;
          for (int k = 0; k < sc.NumSamples(); ++k) {
            const double t_back = sc.TimeAt(k);
            if (t_back < t_out + duration) continue;
            if (t_back + duration > sc.horizon + 1e-9) break;
            ReferenceTrajectory candidate = Sample(
                sc, speed, OutAndBack(l0, offset, t_out, t_back, rate));
            const int violation = checker.FirstViolation(candidate);
            if (violation < 0) return candidate;
            // Moving the return later cannot fix a failure before it starts.
            if (sc.TimeAt(violation) < t_back - 1e-9) break;
          }
        }
      }
      continue;
    }

    std::vector<LateralPlan> plans;
    const bool toward = sc.ego.vl * delta_l > 0.0;
    if (toward) {
      const double sign = delta_l > 0.0 ? 1.0 : -1.0;
      const double fast =
          std::max(rate, std::abs(sc.ego.vl) +
                             std::max(0.0, sign * sc.ego.al) *
                                 options.lateral_lookahead);
      plans.push_back(Ramp(l0, l_goal, 0.0, fast));
    }
    for (double t_start : StartTimes(sc, std::abs(delta_l) / rate)) {
      plans.push_back(Ramp(l0, l_goal, t_start, rate));
    }
    for (const auto& plan : plans) {
      ReferenceTrajectory candidate = Sample(sc, speed, plan);
      if (checker.FirstViolation(candidate) < 0) return candidate;
    }
  }
  throw PlannerError(ErrorKind::kNoReference,
                     "no collision-free reference under the lane-change rules; "
                     "scenario needs a manual reference");
}

}  // namespace stcorridor
