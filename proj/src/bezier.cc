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

#include "stcorridor/bezier.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "stcorridor/common.h"

namespace stcorridor {
namespace {

constexpr int kMaxBinomial = 60;
constexpr double kTimeTolerance = 1e-9;

struct PascalTriangle {
  std::int64_t rows[kMaxBinomial + 1][kMaxBinomial + 1] = {};

  PascalTriangle() {
    for (int n = 0; n <= kMaxBinomial; ++n) {
      rows[n][0] = rows[n][n] = 1;
      for (int k = 1; k < n; ++k) rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
    }
  }
};

const PascalTriangle& Pascal() {
  static const PascalTriangle table;
  return table;
}

}  // namespace

std::int64_t Binomial(int n, int k) {
  if (n < 0 || n > kMaxBinomial || k < 0 || k > n) return 0;
  return Pascal().rows[n][k];
}

double DeCasteljau(std::span<const double> control, double t) {
  std::vector<double> work(control.begin(), control.end());
  for (size_t level = 1; level < work.size(); ++level) {
    for (size_t i = 0; i + level < work.size(); ++i) {
      work[i] = (1.0 - t) * work[i] + t * work[i + 1];
    }
  }
  return work.empty() ? 0.0 : work[0];
}

double EvalBernstein(int n, int i, double t) {
  if (t < 0.0 || t > 1.0) {
    throw PlannerError(ErrorKind::kOutOfRange,
                       "Bernstein parameter " + std::to_string(t) +
                           " outside [0, 1]");
  }
  if (n < 0 || i < 0 || i > n) {
    throw PlannerError(ErrorKind::kOutOfRange, "Bernstein index out of range");
  }
  std::vector<double> unit(n + 1, 0.0);
  unit[i] = 1.0;
  return DeCasteljau(unit, t);
}

std::vector<double> Hodograph(std::span<const double> control) {
  const int n = static_cast<int>(control.size()) - 1;
  if (n < 1) {
    throw PlannerError(ErrorKind::kDegenerateInput,
                       "hodograph of an order-0 curve");
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n * (control[i + 1] - control[i]);
  return out;
}

Eigen::MatrixXd TransitionMatrix(int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) {
      m(i, j) = static_cast<double>(Binomial(i, j)) /
                static_cast<double>(Binomial(n, j));
    }
  }
  return m;
}

std::array<double, 2> BezierPiece::Eval(double t, int derivative) const {
  if (t < knot - kTimeTolerance || t > End() + kTimeTolerance) {
    throw PlannerError(ErrorKind::kOutOfRange,
                       "time " + std::to_string(t) + " outside piece [" +
                           std::to_string(knot) + ", " +
                           std::to_string(End()) + "]");
  }
  const double tau = std::clamp((t - knot) / h, 0.0, 1.0);
  // d^r/dt^r [h B(tau)] = h^(1 - r) B^(r)(tau).
  const double scale = std::pow(h, 1 - derivative);
  std::array<double, 2> out{};
  const std::vector<double>* dims[2] = {&s, &l};
  for (int d = 0; d < 2; ++d) {
    std::vector<double> ctrl = *dims[d];
    for (int r = 0; r < derivative; ++r) {
      if (ctrl.size() < 2) {
        ctrl.assign(1, 0.0);
        break;
      }
      ctrl = Hodograph(ctrl);
    }
    out[d] = scale * DeCasteljau(ctrl, tau);
  }
  return out;
}

int PiecewiseBezierTrajectory::PieceAt(double t) const {
  for (size_t k = 0; k < pieces.size(); ++k) {
    if (t <= pieces[k].End() + kTimeTolerance) return static_cast<int>(k);
  }
  return static_cast<int>(pieces.size()) - 1;
}

std::array<double, 2> PiecewiseBezierTrajectory::Eval(double t,
                                                      int derivative) const {
  if (pieces.empty()) {
    throw PlannerError(ErrorKind::kOutOfRange, "empty trajectory");
  }
  return pieces[PieceAt(t)].Eval(t, derivative);
}

}  // namespace stcorridor
