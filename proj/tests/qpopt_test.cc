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

#include "stcorridor/qpopt.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "stcorridor/bezier.h"
#include "stcorridor/planner.h"
#include "test_support.h"

namespace stcorridor {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(DerivativeOperatorTest, MatchesRepeatedHodograph) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int n = 1; n <= 7; ++n) {
    std::vector<double> c(n + 1);
    for (double& v : c) v = u(rng);
    const VectorXd cv = Eigen::Map<VectorXd>(c.data(), n + 1);
    std::vector<double> d = c;
    for (int r = 0; r <= n; ++r) {
      const MatrixXd op = DerivativeOperator(n, r);
      ASSERT_EQ(op.rows(), n + 1 - r);
      const VectorXd got = op * cv;
      for (int i = 0; i <= n - r; ++i) EXPECT_NEAR(got[i], d[i], 1e-9);
      if (r < n) d = Hodograph(d);
    }
  }
}

TEST(BernsteinGramTest, MatchesNumericalIntegration) {
  for (int m = 0; m <= 6; ++m) {
    const MatrixXd g = BernsteinGram(m);
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        // Simpson is exact for the degree-2m integrand up to round-off when
        // the mesh is fine.
        constexpr int kN = 2000;
        double sum = 0.0;
        for (int k = 0; k <= kN; ++k) {
          const double t = static_cast<double>(k) / kN;
          const double w = (k == 0 || k == kN) ? 1 : (k % 2 ? 4 : 2);
          sum += w * EvalBernstein(m, i, t) * EvalBernstein(m, j, t);
        }
        EXPECT_NEAR(g(i, j), sum / (3.0 * kN), 1e-12);
      }
    }
  }
}

struct Pipeline {
  Scenario sc;
  CorridorArtifacts art;
  AssembledQp qp;
};

Pipeline Build(const std::string& name, CorridorMode mode,
            const PlannerConfig& config = {}) {
  Pipeline s;
  s.sc = testing::LoadFixture(name);
  s.art = BuildCorridorArtifacts(s.sc, config);
  s.qp = AssembleQp(s.sc, s.art.corridors, s.art.reference, mode,
                    config.weights, config.limits);
  return s;
}

TEST(BuildObjectiveTest, QuadraticFormMatchesDirectIntegration) {
  for (const char* name : {"merging", "overtaking", "left_turn"}) {
    const Pipeline s = Build(name, CorridorMode::kTrapezoidal);
    const Weights w;
    std::mt19937_64 rng(32);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
      // Points near the reference keep the cost in a realistic range.
      VectorXd x(s.qp.layout.num_vars());
      for (int k = 0; k < s.qp.layout.pieces; ++k) {
        const double h = s.qp.durations[k];
        for (int i = 0; i <= s.qp.layout.order; ++i) {
          const double t = s.qp.knots[k] + h * i / s.qp.layout.order;
          x[s.qp.layout.Index(k, 0, i)] = s.art.reference.SAt(t) + g(rng);
          x[s.qp.layout.Index(k, 1, i)] =
              s.art.reference.LAt(t) + 0.3 * g(rng);
        }
      }
      const double want = testing::DirectCost(x, s.qp, s.art.reference, w);
      // The quadratic form cancels large terms; round-off scales with them.
      const QpProblem& p = s.qp.problem;
      const double magnitude = std::abs(0.5 * x.dot(p.Q * x)) +
                               std::abs(p.q.dot(x)) + std::abs(p.constant);
      EXPECT_NEAR(p.Objective(x), want, 1e-9 * (1 + want) + 1e-13 * magnitude)
          << name;
      EXPECT_NEAR(IntegrateCost(ToTrajectory(s.qp, x), s.art.reference, w),
                  want, 1e-9 * (1 + want))
          << name;
    }
  }
}

TEST(BuildObjectiveTest, HessianIsSymmetricPositiveSemidefinite) {
  const Pipeline s = Build("merging", CorridorMode::kTrapezoidal);
  const MatrixXd Q(s.qp.problem.Q);
  EXPECT_LT((Q - Q.transpose()).cwiseAbs().maxCoeff(), 1e-9 * Q.norm());
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Q);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-9 * eig.eigenvalues().maxCoeff());
}

class SolvedFixtureTest : public ::testing::TestWithParam<const char*> {};

TEST_P(SolvedFixtureTest, TrajectorySatisfiesEveryConstraint) {
  const PlannerConfig config;
  const Pipeline s = Build(GetParam(), CorridorMode::kTrapezoidal, config);
  const PlanResult res = Solve(s.qp, InteriorPointBackend(config.solver));
  ASSERT_EQ(res.status, QpStatus::kOptimal);
  const auto& traj = *res.trajectory;
  const EgoState& e = s.sc.ego;

  // Initial state.
  const auto p0 = traj.Eval(0.0, 0), v0 = traj.Eval(0.0, 1),
             a0 = traj.Eval(0.0, 2);
  EXPECT_NEAR(p0[0], e.s, 1e-6);
  EXPECT_NEAR(p0[1], e.l, 1e-6);
  EXPECT_NEAR(v0[0], e.vs, 1e-6);
  EXPECT_NEAR(v0[1], e.vl, 1e-6);
  EXPECT_NEAR(a0[0], e.as, 1e-6);
  EXPECT_NEAR(a0[1], e.al, 1e-6);

  // C2 continuity across knots, from the two adjacent pieces.
  for (size_t k = 0; k + 1 < traj.pieces.size(); ++k) {
    const auto& a = traj.pieces[k];
    const auto& b = traj.pieces[k + 1];
    for (int r = 0; r <= 2; ++r) {
      const auto left = a.Eval(a.End(), r);
      const auto right = b.Eval(b.knot, r);
      EXPECT_NEAR(left[0], right[0], 1e-6 * (1 + std::abs(left[0])));
      EXPECT_NEAR(left[1], right[1], 1e-6 * (1 + std::abs(left[1])));
    }
  }

  // Corridor containment and physical limits on dense samples.
  EXPECT_LT(testing::CorridorViolation(s.art.corridors, traj, 5000), 1e-6);
  const PhysicalLimits& lim = config.limits;
  const double horizon = traj.Horizon();
  for (int j = 0; j <= 3000; ++j) {
    const double t = horizon * j / 3000.0;
    const int k = traj.PieceAt(t);
    const double cap = SpeedCap(s.art.corridors.regions[k], s.sc.road, lim);
    const auto v = traj.Eval(t, 1), a = traj.Eval(t, 2), jk = traj.Eval(t, 3);
    EXPECT_GE(v[0], lim.velocity_s.lo - 1e-6);
    EXPECT_LE(v[0], cap + 1e-6);
    EXPECT_LE(std::abs(v[1]), lim.velocity_l.hi + 1e-6);
    EXPECT_GE(a[0], lim.acceleration_s.lo - 1e-6);
    EXPECT_LE(a[0], lim.acceleration_s.hi + 1e-6);
    EXPECT_LE(std::abs(a[1]), lim.acceleration_l.hi + 1e-6);
    EXPECT_LE(std::abs(jk[0]), lim.jerk_s.hi + 1e-6);
    EXPECT_LE(std::abs(jk[1]), lim.jerk_l.hi + 1e-6);
  }
  EXPECT_LT(res.MaxViolation(), kFeasibilityTolerance);
  EXPECT_NEAR(res.objective,
              IntegrateCost(traj, s.art.reference, config.weights),
              1e-6 * (1 + res.objective));
}

INSTANTIATE_TEST_SUITE_P(Fixtures, SolvedFixtureTest,
                         ::testing::Values("merging", "merging_vs9",
                                           "merging_extreme", "overtaking",
                                           "left_turn"));

TEST(AssembleQpTest, LayoutAndTags) {
  const Pipeline s = Build("merging", CorridorMode::kTrapezoidal);
  const int pieces = s.art.corridors.size();
  EXPECT_EQ(s.qp.layout.pieces, pieces);
  EXPECT_EQ(s.qp.layout.num_vars(), pieces * 12);
  EXPECT_EQ(s.qp.layout.Index(1, 1, 2), (2 + 1) * 6 + 2);
  EXPECT_EQ(static_cast<int>(s.qp.eq_tags.size()), s.qp.problem.A_eq.rows());
  EXPECT_EQ(static_cast<int>(s.qp.ie_tags.size()), s.qp.problem.A_ie.rows());
  // 6 boundary rows and 6 continuity rows per interior knot.
  EXPECT_EQ(s.qp.problem.A_eq.rows(), 6 + 6 * (pieces - 1));
  EXPECT_NO_THROW(s.qp.problem.CheckDimensions());
}

TEST(AssembleQpTest, ExtremeStartIsInfeasibleInsideCuboids) {
  const Pipeline s = Build("merging_extreme", CorridorMode::kCuboidal);
  const PlanResult res = Solve(s.qp, InteriorPointBackend());
  EXPECT_EQ(res.status, QpStatus::kInfeasible);
  EXPECT_FALSE(res.trajectory.has_value());
}

TEST(AssembleQpTest, InitialAccelerationBeyondLimitIsCaughtBeforeSolving) {
  Scenario sc = testing::LoadFixture("overtaking");
  sc.ego.as = 1.0;
  PlannerConfig config;
  config.limits.acceleration_s = {-3.0, 0.5};
  const CorridorArtifacts art = BuildCorridorArtifacts(sc, config);
  const AssembledQp qp =
      AssembleQp(sc, art.corridors, art.reference, CorridorMode::kTrapezoidal,
                 config.weights, config.limits);
  ASSERT_TRUE(qp.infeasible_family.has_value());
  EXPECT_EQ(*qp.infeasible_family, ConstraintFamily::kAcceleration);
  EXPECT_GT(qp.fixed_rows.rows(), 0);
  const PlanResult res = Solve(qp, InteriorPointBackend());
  EXPECT_EQ(res.status, QpStatus::kInfeasible);
  EXPECT_EQ(res.violated_family, ConstraintFamily::kAcceleration);
}

TEST(SafetyConstraintsTest, CuboidRowsAreTimeConstant) {
  const Pipeline s = Build("overtaking", CorridorMode::kTrapezoidal);
  bool empty = true;
  const ControlLayout layout{5, s.art.corridors.size()};
  const ConstraintBlock cub = BuildSafetyConstraints(
      s.art.corridors, CorridorMode::kCuboidal, layout, &empty);
  EXPECT_FALSE(empty);
  ASSERT_EQ(cub.rows(), s.art.corridors.size() * 6 * 4);
  for (int k = 0; k < s.art.corridors.size(); ++k) {
    const ConvexRegion box = InscribeCuboid(s.art.corridors.regions[k]);
    for (int i = 0; i <= 5; ++i) {
      const int row = (k * 6 + i) * 4;
      EXPECT_NEAR(-cub.rhs[row], box.lbias, 1e-9);
      EXPECT_NEAR(cub.rhs[row + 1], box.ubias, 1e-9);
    }
  }
}

TEST(SpeedCapTest, RoadLimitAndCurvature) {
  RoadSpec road{0, 100, -2, 2, 12, {{50, 60, 0.1}}};
  PhysicalLimits lim;
  ConvexRegion r;
  r.t = 1;
  r.lbias = 10;
  r.ubias = 20;
  EXPECT_DOUBLE_EQ(SpeedCap(r, road, lim), 12);
  r.uskew = 35;  // reaches s = 55 by the end of the region
  EXPECT_DOUBLE_EQ(SpeedCap(r, road, lim), std::sqrt(2.0 / 0.1));
  lim.velocity_s.hi = 3;
  EXPECT_DOUBLE_EQ(SpeedCap(r, road, lim), 3);
}

TEST(ToTrajectoryTest, UnscalesControlPoints) {
  AssembledQp qp;
  qp.layout = {3, 2};
  qp.knots = {0.0, 0.5};
  qp.durations = {0.5, 2.0};
  VectorXd x(qp.layout.num_vars());
  for (int i = 0; i < x.size(); ++i) x[i] = i;
  const auto traj = ToTrajectory(qp, x);
  ASSERT_EQ(traj.pieces.size(), 2u);
  EXPECT_DOUBLE_EQ(traj.pieces[0].s[1], 1 / 0.5);
  EXPECT_DOUBLE_EQ(traj.pieces[1].l[2], qp.layout.Index(1, 1, 2) / 2.0);
  // Position is the scaled control polygon evaluated directly.
  EXPECT_NEAR(traj.Eval(0.5)[0], x[3], 1e-12);
  EXPECT_NEAR(traj.Eval(2.5)[0], x[qp.layout.Index(1, 0, 3)], 1e-12);
}

TEST(WeightsTest, Validation) {
  Weights w;
  EXPECT_NO_THROW(w.Validate());
  w[2] = -1;
  EXPECT_THROW(w.Validate(), PlannerError);
  w = Weights();
  w[8] = 0;
  w[9] = 0;
  EXPECT_THROW(w.Validate(), PlannerError);
  w[9] = 0.1;
  EXPECT_NO_THROW(w.Validate());
}

TEST(PhysicalLimitsTest, Validation) {
  PhysicalLimits lim;
  EXPECT_NO_THROW(lim.Validate());
  lim.a_cm = 0;
  EXPECT_THROW(lim.Validate(), PlannerError);
  lim = PhysicalLimits();
  lim.jerk_l = {1, -1};
  EXPECT_THROW(lim.Validate(), PlannerError);
}

TEST(CorridorModeTest, ParsesNames) {
  EXPECT_EQ(ParseCorridorMode("trap"), CorridorMode::kTrapezoidal);
  EXPECT_EQ(ParseCorridorMode("trapezoidal"), CorridorMode::kTrapezoidal);
  EXPECT_EQ(ParseCorridorMode("cub"), CorridorMode::kCuboidal);
  EXPECT_EQ(ParseCorridorMode("cuboidal"), CorridorMode::kCuboidal);
  EXPECT_THROW(ParseCorridorMode("round"), PlannerError);
  EXPECT_EQ(CorridorModeName(CorridorMode::kCuboidal), "cuboidal");
}

}  // namespace
}  // namespace stcorridor
