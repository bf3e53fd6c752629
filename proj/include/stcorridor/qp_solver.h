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

// Convex QP backend contract and a sparse primal-dual interior-point
// implementation of it.
//
//   minimize    0.5 x' Q x + q' x + constant
//   subject to  A_eq x  = b_eq
//               A_ie x <= b_ie

#ifndef STCORRIDOR_QP_SOLVER_H_
#define STCORRIDOR_QP_SOLVER_H_

#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace stcorridor {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct QpProblem {
  SparseMatrix Q;
  Eigen::VectorXd q;
  double constant = 0.0;
  SparseMatrix A_eq;
  Eigen::VectorXd b_eq;
  SparseMatrix A_ie;
  Eigen::VectorXd b_ie;

  int num_vars() const { return static_cast<int>(q.size()); }
  double Objective(const Eigen::VectorXd& x) const;
  // Throws kDegenerateInput when block dimensions disagree.
  void CheckDimensions() const;
};

enum class QpStatus { kOptimal, kInfeasible, kSolverLimit };

std::string_view QpStatusName(QpStatus status);

struct QpSettings {
  // Relative KKT tolerance of the interior-point iterations.
  double tolerance = 1e-9;
  int max_iterations = 100;
  // Snap to the identified active set at the end.
  bool polish = true;
  // Phase-one violation (in normalized row units) above which the problem is
  // declared infeasible.
  double infeasibility_tolerance = 1e-7;
};

struct QpSolution {
  QpStatus status = QpStatus::kSolverLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // equality multipliers
  Eigen::VectorXd z;  // inequality multipliers (>= 0)
  double objective = 0.0;
  int iterations = 0;
  bool polished = false;
  // Unscaled KKT residuals at x (infinity norms).
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

class QpBackend {
 public:
  virtual ~QpBackend() = default;
  virtual std::string_view name() const = 0;
  virtual QpSolution Solve(const QpProblem& problem) const = 0;
};

// Mehrotra predictor-corrector on the regularized KKT system (sparse LDL'),
// followed by active-set polishing. Failure to converge triggers a phase-one
// feasibility problem that separates infeasible problems from iteration
// limits.
class InteriorPointBackend final : public QpBackend {
 public:
  explicit InteriorPointBackend(QpSettings settings = {})
      : settings_(settings) {}

  std::string_view name() const override { return "interior-point"; }
  QpSolution Solve(const QpProblem& problem) const override;

  const QpSettings& settings() const { return settings_; }

 private:
  QpSettings settings_;
};

}  // namespace stcorridor

#endif  // STCORRIDOR_QP_SOLVER_H_
