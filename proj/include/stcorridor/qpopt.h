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

// Trajectory optimization over a corridor sequence.
//
// Piece k of the trajectory is h_k * B_k((t - T_k) / h_k). The decision
// variables are the position-scaled control points c^_i = h_k * c_i, stored at
// index (2 k + dim) * (n + 1) + i with dim 0 = s and dim 1 = l. With this
// convention the r-th derivative of piece k has control points
// D^r c^ / h_k^r, where D^r is the r-fold hodograph operator.

#ifndef STCORRIDOR_QPOPT_H_
#define STCORRIDOR_QPOPT_H_

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stcorridor/bezier.h"
#include "stcorridor/common.h"
#include "stcorridor/corridor.h"
#include "stcorridor/qp_solver.h"
#include "stcorridor/scenario.h"

namespace stcorridor {

// Cost weights: w1..w5 act on s, w6..w10 on l. In each group the terms are
// position tracking, velocity tracking, acceleration, jerk and terminal
// position.
struct Weights {
  std::array<double, 10> w = {1.0, 0.5, 1.0, 0.1, 10.0,
                              1.0, 0.5, 1.0, 0.1, 10.0};

  double& operator[](int one_based) { return w[one_based - 1]; }
  double operator[](int one_based) const { return w[one_based - 1]; }
  // Throws kValidation on negative weights or when neither acceleration nor
  // jerk is penalized in some dimension.
  void Validate() const;
};

struct PhysicalLimits {
  // The longitudinal velocity upper bound is further capped per piece by the
  // road speed limit and sqrt(a_cm / curvature).
  Interval velocity_s{0.0, std::numeric_limits<double>::infinity()};
  Interval acceleration_s{-3.0, 2.0};
  Interval jerk_s{-4.0, 4.0};
  Interval velocity_l{-2.5, 2.5};
  Interval acceleration_l{-2.0, 2.0};
  Interval jerk_l{-4.0, 4.0};
  double a_cm = 2.0;

  void Validate() const;
};

enum class CorridorMode { kTrapezoidal, kCuboidal };

std::string_view CorridorModeName(CorridorMode mode);
// Accepts "trapezoidal"/"trap" and "cuboidal"/"cub".
CorridorMode ParseCorridorMode(std::string_view name);

enum class ConstraintFamily {
  kBoundary,
  kContinuity,
  kSafetyS,
  kSafetyL,
  kVelocity,
  kAcceleration,
  kJerk,
};
inline constexpr int kNumConstraintFamilies = 7;

std::string_view ConstraintFamilyName(ConstraintFamily family);

struct ConstraintTag {
  ConstraintFamily family;
  int piece = 0;
  int dim = 0;
};

// Linear rows a' x (= or <=) b with their tags.
struct ConstraintBlock {
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> rhs;
  std::vector<ConstraintTag> tags;

  int rows() const { return static_cast<int>(rhs.size()); }
  // Appends a row given as (index, coefficient) pairs.
  void AddRow(const std::vector<std::pair<int, double>>& coeffs, double b,
              ConstraintTag tag);
  void Append(const ConstraintBlock& other);
};

// Layout of the decision vector.
struct ControlLayout {
  int order = kDefaultBezierOrder;
  int pieces = 0;

  int num_vars() const { return pieces * 2 * (order + 1); }
  int Index(int piece, int dim, int i) const {
    return (piece * 2 + dim) * (order + 1) + i;
  }
};

// (n + 1 - r) x (n + 1) matrix mapping control points to the control points
// of the r-th hodograph.
Eigen::MatrixXd DerivativeOperator(int n, int r);

// Gram matrix of the degree-m Bernstein basis on [0, 1].
Eigen::MatrixXd BernsteinGram(int m);

struct Objective {
  SparseMatrix Q;
  Eigen::VectorXd q;
  double constant = 0.0;
};

Objective BuildObjective(const CorridorSequence& sequence,
                         const ReferenceTrajectory& reference,
                         const Weights& weights, int order = kDefaultBezierOrder);

// Directly integrated cost of a piecewise trajectory against the reference
// (adaptive-free composite Gauss-Legendre); used to cross-check the
// quadratic form.
double IntegrateCost(const PiecewiseBezierTrajectory& trajectory,
                     const ReferenceTrajectory& reference,
                     const Weights& weights);

ConstraintBlock BuildBoundaryConstraints(const EgoState& ego,
                                         const ControlLayout& layout,
                                         double h0);

ConstraintBlock BuildContinuityConstraints(const CorridorSequence& sequence,
                                           const ControlLayout& layout);

// Safety rows for the given mode. In cuboidal mode the regions are replaced
// by their inscribed cuboids; *infeasible is set when any cuboid is empty.
ConstraintBlock BuildSafetyConstraints(const CorridorSequence& sequence,
                                       CorridorMode mode,
                                       const ControlLayout& layout,
                                       bool* infeasible = nullptr);

// Per-piece longitudinal speed cap.
double SpeedCap(const ConvexRegion& region, const RoadSpec& road,
                const PhysicalLimits& limits);

ConstraintBlock BuildPhysicalConstraints(const CorridorSequence& sequence,
                                         const RoadSpec& road,
                                         const PhysicalLimits& limits,
                                         const ControlLayout& layout);

struct AssembledQp {
  QpProblem problem;
  ControlLayout layout;
  std::vector<double> knots;     // T_k
  std::vector<double> durations;  // h_k
  std::vector<ConstraintTag> eq_tags;
  std::vector<ConstraintTag> ie_tags;
  // Inequality rows that only involve control points pinned by the boundary
  // conditions. They are checked before solving and kept out of the QP.
  ConstraintBlock fixed_rows;
  // Set when infeasibility is known before solving.
  std::optional<ConstraintFamily> infeasible_family;
};

AssembledQp AssembleQp(const Scenario& scenario,
                       const CorridorSequence& sequence,
                       const ReferenceTrajectory& reference, CorridorMode mode,
                       const Weights& weights, const PhysicalLimits& limits,
                       int order = kDefaultBezierOrder);

struct PlanResult {
  QpStatus status = QpStatus::kSolverLimit;
  std::optional<PiecewiseBezierTrajectory> trajectory;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double solve_time_ms = 0.0;
  int iterations = 0;
  // Largest violation per constraint family, in the family's physical unit.
  std::array<double, kNumConstraintFamilies> max_violation{};
  std::optional<ConstraintFamily> violated_family;

  double MaxViolation() const;
};

inline constexpr double kFeasibilityTolerance = 1e-6;

// Largest row violation of x per constraint family.
std::array<double, kNumConstraintFamilies> FamilyViolations(
    const AssembledQp& qp, const Eigen::VectorXd& x);

PiecewiseBezierTrajectory ToTrajectory(const AssembledQp& qp,
                                       const Eigen::VectorXd& x);

PlanResult Solve(const AssembledQp& qp, const QpBackend& backend);

}  // namespace stcorridor

#endif  // STCORRIDOR_QPOPT_H_
