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

// End-to-end acceptance checks. Prints one PASS/FAIL line per check; with an
// argument, runs only the named check. Exits nonzero when a check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stcorridor/bezier.h"
#include "stcorridor/corridor.h"
#include "stcorridor/planner.h"
#include "stcorridor/qpopt.h"
#include "stcorridor/report.h"
#include "test_support.h"

namespace stcorridor {
namespace {

using testing::LoadFixture;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

const ModeReport& ModeOf(const RunReport& report, CorridorMode mode) {
  return *report.Find(mode);
}

RunReport RunBoth(const std::string& fixture) {
  return RunScenario(LoadFixture(fixture), RunMode::kBoth, PlannerConfig{},
                     100.0);
}

double PeakAbs(const std::vector<TrajectorySample>& samples, int column) {
  double peak = 0.0;
  for (const auto& row : samples) peak = std::max(peak, std::abs(row[column]));
  return peak;
}

constexpr int kColAs = 5;
constexpr int kColAl = 6;

Outcome MergingFeasibilityGap() {
  const RunReport extreme = RunBoth("merging_extreme");
  const RunReport slower = RunBoth("merging_vs9");
  const QpStatus trap = ModeOf(extreme, CorridorMode::kTrapezoidal).status;
  const QpStatus cub = ModeOf(extreme, CorridorMode::kCuboidal).status;
  const QpStatus cub9 = ModeOf(slower, CorridorMode::kCuboidal).status;
  const bool pass = trap == QpStatus::kOptimal &&
                    cub == QpStatus::kInfeasible && cub9 == QpStatus::kOptimal;
  return {pass, Fmt("extreme start: trapezoidal %s, cuboidal %s; "
                    "vs=9: cuboidal %s",
                    std::string(QpStatusName(trap)).c_str(),
                    std::string(QpStatusName(cub)).c_str(),
                    std::string(QpStatusName(cub9)).c_str())};
}

Outcome MergingComfortOrdering() {
  const RunReport report = RunBoth("merging");
  const auto& trap = ModeOf(report, CorridorMode::kTrapezoidal);
  const auto& cub = ModeOf(report, CorridorMode::kCuboidal);
  if (trap.status != QpStatus::kOptimal || cub.status != QpStatus::kOptimal) {
    return {false, "both modes must be optimal"};
  }
  // Peaks are compared with a small tolerance; identical solutions differ
  // by solver round-off.
  constexpr double kTol = 1e-6;
  const double as_t = PeakAbs(trap.samples, kColAs);
  const double as_c = PeakAbs(cub.samples, kColAs);
  const double al_t = PeakAbs(trap.samples, kColAl);
  const double al_c = PeakAbs(cub.samples, kColAl);
  const bool as_ok = as_t <= as_c + kTol;
  const bool al_ok = al_t <= al_c + kTol;
  const bool al_strict = al_t < al_c - kTol;
  return {as_ok && al_ok && al_strict,
          Fmt("max|as| %.6f vs %.6f (%s), max|al| %.9f vs %.9f (<=: %s, "
              "strict: %s)",
              as_t, as_c, as_ok ? "ok" : "violated", al_t, al_c,
              al_ok ? "ok" : "violated", al_strict ? "ok" : "not strict")};
}

Outcome OvertakingAcceleration() {
  const RunReport report = RunBoth("overtaking");
  const auto& trap = ModeOf(report, CorridorMode::kTrapezoidal);
  const auto& cub = ModeOf(report, CorridorMode::kCuboidal);
  const bool feasible =
      trap.status == QpStatus::kOptimal && cub.status == QpStatus::kOptimal;
  const double as_t = PeakAbs(trap.samples, kColAs);
  const double as_c = PeakAbs(cub.samples, kColAs);
  return {feasible && as_t < as_c,
          Fmt("trapezoidal %s max|as| %.4f, cuboidal %s max|as| %.4f",
              std::string(QpStatusName(trap.status)).c_str(), as_t,
              std::string(QpStatusName(cub.status)).c_str(), as_c)};
}

Outcome LeftTurnAgreement() {
  const RunReport report = RunBoth("left_turn");
  const auto& trap = ModeOf(report, CorridorMode::kTrapezoidal);
  const auto& cub = ModeOf(report, CorridorMode::kCuboidal);
  if (trap.status != QpStatus::kOptimal || cub.status != QpStatus::kOptimal ||
      trap.samples.size() != cub.samples.size()) {
    return {false, "both modes must be optimal with matching exports"};
  }
  double worst = 0.0;
  for (size_t i = 0; i < trap.samples.size(); ++i) {
    worst = std::max({worst, std::abs(trap.samples[i][1] - cub.samples[i][1]),
                      std::abs(trap.samples[i][2] - cub.samples[i][2])});
  }
  return {worst <= 1e-3,
          Fmt("%zu samples, max position gap %.3g m", trap.samples.size(),
              worst)};
}

// Scenario sets shared by the safety and containment checks.
struct ScenarioRun {
  std::string name;
  std::optional<ModePlan> trap;
  std::optional<ModePlan> cub;
};

std::vector<ScenarioRun> RunRandomScenarios(int wanted, int* attempts) {
  std::mt19937_64 rng(20260415);
  std::vector<ScenarioRun> runs;
  const PlannerConfig config;
  *attempts = 0;
  while (static_cast<int>(runs.size()) < wanted && *attempts < 50 * wanted) {
    ++*attempts;
    const Scenario sc = testing::RandomScenario(rng);
    CorridorArtifacts art;
    try {
      art = BuildCorridorArtifacts(sc, config);
    } catch (const PlannerError&) {
      continue;  // no reference or no corridor for this draw
    }
    ScenarioRun run{"random#" + std::to_string(*attempts), {}, {}};
    run.trap = PlanMode(sc, art, CorridorMode::kTrapezoidal, config);
    run.cub = PlanMode(sc, art, CorridorMode::kCuboidal, config);
    runs.push_back(std::move(run));
  }
  return runs;
}

const std::vector<ScenarioRun>& RandomRuns(int* attempts_out = nullptr) {
  static int attempts = 0;
  static const std::vector<ScenarioRun> runs = RunRandomScenarios(200, &attempts);
  if (attempts_out) *attempts_out = attempts;
  return runs;
}

Outcome ContinuousSafety() {
  std::vector<ScenarioRun> runs;
  for (const char* name : {"merging", "merging_extreme", "merging_vs9",
                           "overtaking", "left_turn"}) {
    const Scenario sc = LoadFixture(name);
    runs.push_back({name, Plan(sc, CorridorMode::kTrapezoidal),
                    Plan(sc, CorridorMode::kCuboidal)});
  }
  int attempts = 0;
  const auto& random = RandomRuns(&attempts);
  runs.insert(runs.end(), random.begin(), random.end());

  int solves = 0;
  double worst = 0.0;
  std::string worst_name = "-";
  for (const auto& run : runs) {
    for (const auto* plan : {&*run.trap, &*run.cub}) {
      if (plan->result.status != QpStatus::kOptimal) continue;
      ++solves;
      const double v = testing::CorridorViolation(
          plan->corridors, *plan->result.trajectory, 10000);
      if (v > worst) {
        worst = v;
        worst_name = run.name + "/" + std::string(CorridorModeName(plan->mode));
      }
    }
  }
  const bool pass = random.size() == 200 && worst <= 1e-6;
  return {pass, Fmt("%d optimal solves (%zu random scenarios from %d draws), "
                    "worst violation %.3g m (%s)",
                    solves, random.size(), attempts, worst,
                    worst_name.c_str())};
}

// Per-variable bounds implied by single-variable safety rows.
std::map<int, Interval> VariableBounds(const ConstraintBlock& block) {
  std::map<int, Interval> bounds;
  std::vector<std::vector<std::pair<int, double>>> rows(block.rows());
  for (const auto& e : block.entries) rows[e.row()].push_back({e.col(), e.value()});
  for (int r = 0; r < block.rows(); ++r) {
    if (rows[r].size() != 1) continue;
    const auto [col, a] = rows[r][0];
    auto it = bounds.try_emplace(col, Interval{-1e300, 1e300}).first;
    if (a > 0) it->second.hi = std::min(it->second.hi, block.rhs[r] / a);
    if (a < 0) it->second.lo = std::max(it->second.lo, block.rhs[r] / a);
  }
  return bounds;
}

Outcome SolutionSpaceContainment() {
  std::mt19937_64 rng(7);
  int checked = 0;
  int nonempty = 0;
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    CorridorSequence seq;
    seq.dt = 0.1;
    seq.regions.push_back(testing::RandomRegion(rng));
    const ControlLayout layout{kDefaultBezierOrder, 1};
    bool empty = false;
    const auto trap = VariableBounds(
        BuildSafetyConstraints(seq, CorridorMode::kTrapezoidal, layout));
    const auto cub = VariableBounds(
        BuildSafetyConstraints(seq, CorridorMode::kCuboidal, layout, &empty));
    ++checked;
    if (empty) continue;  // an empty box is trivially contained
    ++nonempty;
    for (const auto& [col, box] : cub) {
      const auto it = trap.find(col);
      if (it == trap.end() || box.lo < it->second.lo - 1e-9 ||
          box.hi > it->second.hi + 1e-9) {
        ++violations;
        break;
      }
    }
  }

  int both = 0;
  int worse = 0;
  double worst_gap = -1e300;
  for (const auto& run : RandomRuns()) {
    if (run.trap->result.status != QpStatus::kOptimal ||
        run.cub->result.status != QpStatus::kOptimal) {
      continue;
    }
    ++both;
    const double gap = run.trap->result.objective - run.cub->result.objective;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) ++worse;
  }
  return {violations == 0 && worse == 0 && both > 0,
          Fmt("%d regions (%d non-empty boxes), %d not contained; %d "
              "scenarios with both optimal, %d with trapezoidal worse, max "
              "objective gap %.3g",
              checked, nonempty, violations, both, worse, worst_gap)};
}

Outcome MathOracles() {
  // Monomials expanded in the Bernstein basis.
  double transition = 0.0;
  bool column_one = true;
  for (int n = 1; n <= 8; ++n) {
    const Eigen::MatrixXd m = TransitionMatrix(n);
    for (int i = 0; i <= n; ++i) {
      column_one = column_one && std::abs(m(i, 1) - double(i) / n) <= 1e-15;
    }
    for (int k = 0; k <= 50; ++k) {
      const double t = k / 50.0;
      for (int j = 0; j <= n; ++j) {
        double sum = 0.0;
        for (int i = 0; i <= n; ++i) sum += m(i, j) * EvalBernstein(n, i, t);
        transition = std::max(transition, std::abs(sum - std::pow(t, j)));
      }
    }
  }

  // Partition of unity.
  double unity = 0.0;
  for (int n = 0; n <= 12; ++n) {
    for (int k = 0; k <= 100; ++k) {
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) sum += EvalBernstein(n, i, k / 100.0);
      unity = std::max(unity, std::abs(sum - 1.0));
    }
  }

  // Hodograph against central differences.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double hodograph = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(6);
    for (double& v : c) v = u(rng);
    const auto d = Hodograph(c);
    for (int k = 1; k < 20; ++k) {
      const double t = k / 20.0;
      const double fd = (DeCasteljau(c, t + 1e-6) - DeCasteljau(c, t - 1e-6)) / 2e-6;
      hodograph = std::max(hodograph, std::abs(fd - DeCasteljau(d, t)));
    }
  }

  // Gradient of the quadratic form against the directly integrated cost.
  const Scenario sc = LoadFixture("merging");
  const PlannerConfig config;
  const ModePlan plan = Plan(sc, CorridorMode::kTrapezoidal, config);
  const CorridorArtifacts art = BuildCorridorArtifacts(sc, config);
  const QpProblem& p = plan.qp.problem;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.num_vars());
  for (int k = 0; k < plan.qp.layout.pieces; ++k) {
    for (int d = 0; d < 2; ++d) {
      for (int i = 0; i <= plan.qp.layout.order; ++i) {
        const double t = plan.qp.knots[k] + plan.qp.durations[k] * i / 5.0;
        const double pos = d == 0 ? art.reference.SAt(t) : art.reference.LAt(t);
        x[plan.qp.layout.Index(k, d, i)] = pos + 0.3 * u(rng);
      }
    }
  }
  const Eigen::VectorXd grad = p.Q * x + p.q;
  double num = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    const double step = 1e-3;
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    const double fd = (testing::DirectCost(xp, plan.qp, art.reference,
                                           config.weights) -
                       testing::DirectCost(xm, plan.qp, art.reference,
                                           config.weights)) /
                      (2 * step);
    num = std::max(num, std::abs(fd - grad[j]));
  }
  const double gradient = num / std::max(1.0, grad.cwiseAbs().maxCoeff());
  const double value_gap =
      std::abs(p.Objective(x) -
               testing::DirectCost(x, plan.qp, art.reference, config.weights)) /
      std::max(1.0, std::abs(p.Objective(x)));

  const bool pass = transition <= 1e-10 && column_one && unity <= 1e-12 &&
                    hodograph <= 1e-5 && gradient <= 1e-5;
  return {pass, Fmt("transition %.2g (M[i][1]=i/n %s), unity %.2g, "
                    "hodograph %.2g, gradient rel %.2g (value rel %.2g)",
                    transition, column_one ? "ok" : "wrong", unity, hodograph,
                    gradient, value_gap)};
}

Outcome CorridorSegmenterEquivalence() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> slope(-12.0, 12.0);
  const double dt = 0.1;
  const CorridorOptions options;
  int mismatches = 0;
  int regions = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nums = std::uniform_int_distribution<int>(2, 71)(rng);
    // Piecewise-linear profiles: slopes change at random grid samples.
    auto profile = [&](double start) {
      std::vector<double> v(nums);
      v[0] = start;
      double m = slope(rng);
      for (int i = 1; i < nums; ++i) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.15) {
          m = slope(rng);
        }
        v[i] = v[i - 1] + m * dt;
      }
      return v;
    };
    const auto lb = profile(slope(rng));
    auto ub = profile(0.0);
    for (int i = 0; i < nums; ++i) ub[i] += lb[i] + 50.0;
    const auto got = Convexify2D(lb, ub, -1.0, 1.0, dt, options);
    const auto want = testing::BruteForceSegments(
        lb, ub, dt, options.skew_epsilon, options.split_threshold);
    regions += static_cast<int>(want.size());
    bool same = got.size() == want.size();
    for (size_t k = 0; same && k < got.size(); ++k) {
      const auto& g = got[k];
      const auto& w = want[k];
      same = std::abs(g.t_beg - w.t_beg) <= 1e-9 &&
             std::abs(g.t_end - w.t_end) <= 1e-9 &&
             std::abs(g.lbias - w.lbias) <= 1e-9 &&
             std::abs(g.lskew - w.lskew) <= 1e-9 &&
             std::abs(g.ubias - w.ubias) <= 1e-9 &&
             std::abs(g.uskew - w.uskew) <= 1e-9;
    }
    if (!same) ++mismatches;
  }
  return {mismatches == 0,
          Fmt("100 profiles, %d reference regions, %d mismatching profiles",
              regions, mismatches)};
}

Outcome PipelineLatency() {
  const Scenario sc = LoadFixture("merging");
  const PlannerConfig config;
  std::vector<double> times;
  for (int run = 0; run < 7; ++run) {
    const auto start = std::chrono::steady_clock::now();
    const CorridorArtifacts art = BuildCorridorArtifacts(sc, config);
    const ModePlan plan = PlanMode(sc, art, CorridorMode::kTrapezoidal, config);
    const auto stop = std::chrono::steady_clock::now();
    if (plan.result.status != QpStatus::kOptimal) {
      return {false, "merging fixture did not solve"};
    }
    times.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  const double median = times[times.size() / 2];
  return {times.back() < 100.0,
          Fmt("slicing + corridors + QP: median %.2f ms, worst %.2f ms over "
              "%zu runs",
              median, times.back(), times.size())};
}

}  // namespace
}  // namespace stcorridor

int main(int argc, char** argv) {
  using stcorridor::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"merging_feasibility_gap", stcorridor::MergingFeasibilityGap},
      {"merging_comfort_ordering", stcorridor::MergingComfortOrdering},
      {"overtaking_acceleration", stcorridor::OvertakingAcceleration},
      {"left_turn_agreement", stcorridor::LeftTurnAgreement},
      {"continuous_safety", stcorridor::ContinuousSafety},
      {"solution_space_containment", stcorridor::SolutionSpaceContainment},
      {"math_oracles", stcorridor::MathOracles},
      {"corridor_segmenter_equivalence",
       stcorridor::CorridorSegmenterEquivalence},
      {"pipeline_latency", stcorridor::PipelineLatency},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int failures = 0;
  bool matched = false;
  for (const auto& [name, check] : checks) {
    if (!only.empty() && only != name) continue;
    matched = true;
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", out.pass ? "PASS" : "FAIL", name.c_str(),
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (!matched) {
    std::printf("FAIL unknown check '%s'\n", only.c_str());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
