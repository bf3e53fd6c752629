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

// Bernstein-basis algebra and piecewise Bezier trajectories.
//
// A trajectory piece k on [T_k, T_k + h_k] is h_k * B_k((t - T_k) / h_k) where
// B_k is a Bezier polynomial on [0, 1] with control points c_i.

#ifndef STCORRIDOR_BEZIER_H_
#define STCORRIDOR_BEZIER_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stcorridor {

inline constexpr int kDefaultBezierOrder = 5;

// Binomial coefficient from an integer Pascal triangle (exact, n <= 60).
std::int64_t Binomial(int n, int k);

// Value of b_n^i(t) = C(n, i) t^i (1 - t)^(n - i), evaluated by de Casteljau.
// Throws kOutOfRange for t outside [0, 1] or i outside [0, n].
double EvalBernstein(int n, int i, double t);

// Bezier polynomial with the given control points at t in [0, 1].
double DeCasteljau(std::span<const double> control, double t);

// Control points of the derivative curve: n * (c_{i+1} - c_i). Throws
// kDegenerateInput for a single control point.
std::vector<double> Hodograph(std::span<const double> control);

// M(i, j) is the coefficient of b_n^i in the Bernstein expansion of t^j,
// i.e. C(i, j) / C(n, j) for i >= j and 0 otherwise.
Eigen::MatrixXd TransitionMatrix(int n);

// One trajectory piece. Control points are in the unscaled form c_i; the
// curve value is h * B((t - knot) / h).
struct BezierPiece {
  int order = kDefaultBezierOrder;
  std::vector<double> s;
  std::vector<double> l;
  double h = 1.0;
  double knot = 0.0;

  double End() const { return knot + h; }

  // Derivative of the given order (0..order) in each dimension at absolute
  // time t. Throws kOutOfRange outside [knot, knot + h].
  std::array<double, 2> Eval(double t, int derivative = 0) const;
};

struct PiecewiseBezierTrajectory {
  std::vector<BezierPiece> pieces;

  double Horizon() const { return pieces.empty() ? 0.0 : pieces.back().End(); }
  // Piece index covering t (the earlier piece at a shared knot).
  int PieceAt(double t) const;
  std::array<double, 2> Eval(double t, int derivative = 0) const;
};

}  // namespace stcorridor

#endif  // STCORRIDOR_BEZIER_H_
