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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

namespace stcorridor {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kFixedRowTolerance = 1e-9;
constexpr int kQuadraturePoints = 8;

struct Quadrature {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // summing to 1
};

// Gauss-Legendre rule from the eigen-decomposition of the Jacobi matrix.
const Quadrature& GaussLegendre() {
  static const Quadrature rule = [] {
    const int m = kQuadraturePoints;
    MatrixXd jacobi = MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i) {
      const double beta = i / std::sqrt(4.0 * i * i - 1.0);
      jacobi(i, i - 1) = jacobi(i - 1, i) = beta;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(jacobi);
    Quadrature q;
    for (int i = 0; i < m; ++i) {
      const double v = eig.eigenvectors()(0, i);
      q.nodes.push_back(0.5 * (eig.eigenvalues()[i] + 1.0));
      q.weights.push_back(v * v);
    }
    return q;
  }();
  return rule;
}

// Breakpoints of the reference inside [a, b]: the ends plus interior grid
// times, so that the reference is affine between consecutive entries.
std::vector<double> Breakpoints(double a, double b, double dt) {
  std::vector<double> out = {a};
  const int first = static_cast<int>(std::floor(a / dt + 1e-9)) + 1;
  for (int j = first; j * dt < b - 1e-9; ++j) {
    if (j * dt > a + 1e-9) out.push_back(j * dt);
  }
  out.push_back(b);
  return out;
}

// Integrates f over [a, b] split at the reference breakpoints.
template <typename F>
void ForEachQuadraturePoint(double a, double b, double dt, F&& f) {
  const Quadrature& gl = GaussLegendre();
  const auto pts = Breakpoints(a, b, dt);
  for (size_t j = 0; j + 1 < pts.size(); ++j) {
    const double len = pts[j + 1] - pts[j];
    const double mid = 0.5 * (pts[j] + pts[j + 1]);
    for (size_t g = 0; g < gl.nodes.size(); ++g) {
      f(pts[j] + gl.nodes[g] * len, len * gl.weights[g], mid);
    }
  }
}

double RefPosition(const ReferenceTrajectory& ref, int dim, double t) {
  return dim == 0 ? ref.SAt(t) : ref.LAt(t);
}

// Reference velocity on the segment containing `mid`.
double RefVelocity(const ReferenceTrajectory& ref, int dim, double mid) {
  return dim == 0 ? ref.VsAt(mid) : ref.VlAt(mid);
}

std::vector<double> RegionDurations(const CorridorSequence& seq) {
  std::vector<double> h;
  for (int k = 0; k < seq.size(); ++k) h.push_back(seq.EndTime(k) - seq.StartTime(k));
  return h;
}

// Row of D^r scaled to physical derivative units (1 / h^r).
std::vector<std::pair<int, double>> DerivativeRow(const ControlLayout& layout,
                                                  int piece, int dim, int r,
                                                  int i, double h,
                                                  double sign = 1.0) {
  const MatrixXd d = DerivativeOperator(layout.order, r);
  const double scale = sign / std::pow(h, r);
  std::vector<std::pair<int, double>> row;
  for (int j = 0; j <= layout.order; ++j) {
    if (d(i, j) != 0.0) row.emplace_back(layout.Index(piece, dim, j), scale * d(i, j));
  }
  return row;
}

void AddBoundsRows(ConstraintBlock* block, const ControlLayout& layout,
                   int piece, int dim, int r, double h, double lo, double hi,
                   ConstraintFamily family) {
  for (int i = 0; i + r <= layout.order; ++i) {
    const ConstraintTag tag{family, piece, dim};
    if (std::isfinite(hi)) {
      block->AddRow(DerivativeRow(layout, piece, dim, r, i, h), hi, tag);
    }
    if (std::isfinite(lo)) {
      block->AddRow(DerivativeRow(layout, piece, dim, r, i, h, -1.0), -lo, tag);
    }
  }
}

SparseMatrix ToSparse(const ConstraintBlock& block, int cols) {
  SparseMatrix m(block.rows(), cols);
  m.setFromTriplets(block.entries.begin(), block.entries.end());
  return m;
}

VectorXd ToVector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<int>(v.size()));
}

// Control points of the first piece determined by the boundary rows; other
// entries are NaN.
VectorXd PinnedControlPoints(const EgoState& ego, const ControlLayout& layout,
                             double h0) {
  const int n = layout.order;
  VectorXd x = VectorXd::Constant(layout.num_vars(),
                                  std::numeric_limits<double>::quiet_NaN());
  const double p[2] = {ego.s, ego.l};
  const double v[2] = {ego.vs, ego.vl};
  const double a[2] = {ego.as, ego.al};
  for (int d = 0; d < 2; ++d) {
    const double c0 = p[d];
    const double c1 = c0 + h0 * v[d] / n;
    const double c2 = 2.0 * c1 - c0 + h0 * h0 * a[d] / (n * (n - 1));
    x[layout.Index(0, d, 0)] = c0;
    x[layout.Index(0, d, 1)] = c1;
    x[layout.Index(0, d, 2)] = c2;
  }
  return x;
}

}  // namespace

void Weights::Validate() const {
  for (int i = 0; i < 10; ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) {
      throw PlannerError(ErrorKind::kValidation,
                         "weight must be finite and nonnegative",
                         "w" + std::to_string(i + 1));
    }
  }
  if (w[2] <= 0.0 && w[3] <= 0.0) {
    throw PlannerError(ErrorKind::kValidation,
                       "one of w3, w4 must be positive", "w3");
  }
  if (w[7] <= 0.0 && w[8] <= 0.0) {
    throw PlannerError(ErrorKind::kValidation,
                       "one of w8, w9 must be positive", "w8");
  }
}

void PhysicalLimits::Validate() const {
  const std::pair<const char*, Interval> pairs[] = {
      {"velocity_s", velocity_s},         {"acceleration_s", acceleration_s},
      {"jerk_s", jerk_s},                 {"velocity_l", velocity_l},
      {"acceleration_l", acceleration_l}, {"jerk_l", jerk_l},
  };
  for (const auto& [name, iv] : pairs) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
      throw PlannerError(ErrorKind::kValidation,
                         "limit lower bound must be below upper bound", name);
    }
  }
  if (!(a_cm > 0.0) || !std::isfinite(a_cm)) {
    throw PlannerError(ErrorKind::kValidation, "a_cm must be positive", "a_cm");
  }
}

std::string_view CorridorModeName(CorridorMode mode) {
  return mode == CorridorMode::kTrapezoidal ? "trapezoidal" : "cuboidal";
}

CorridorMode ParseCorridorMode(std::string_view name) {
  if (name == "trapezoidal" || name == "trap") return CorridorMode::kTrapezoidal;
  if (name == "cuboidal" || name == "cub") return CorridorMode::kCuboidal;
  throw PlannerError(ErrorKind::kValidation,
                     "unknown corridor mode '" + std::string(name) + "'",
                     "mode");
}

std::string_view ConstraintFamilyName(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::kBoundary:
      return "boundary";
    case ConstraintFamily::kContinuity:
      return "continuity";
    case ConstraintFamily::kSafetyS:
      return "safety_s";
    case ConstraintFamily::kSafetyL:
      return "safety_l";
    case ConstraintFamily::kVelocity:
      return "velocity";
    case ConstraintFamily::kAcceleration:
      return "acceleration";
    case ConstraintFamily::kJerk:
      return "jerk";
  }
  return "unknown";
}

void ConstraintBlock::AddRow(const std::vector<std::pair<int, double>>& coeffs,
                             double b, ConstraintTag tag) {
  const int row = rows();
  for (const auto& [col, value] : coeffs) entries.emplace_back(row, col, value);
  rhs.push_back(b);
  tags.push_back(tag);
}

void ConstraintBlock::Append(const ConstraintBlock& other) {
  const int offset = rows();
  for (const auto& e : other.entries) {
    entries.emplace_back(e.row() + offset, e.col(), e.value());
  }
  rhs.insert(rhs.end(), other.rhs.begin(), other.rhs.end());
  tags.insert(tags.end(), other.tags.begin(), other.tags.end());
}

MatrixXd DerivativeOperator(int n, int r) {
  MatrixXd d = MatrixXd::Identity(n + 1, n + 1);
  for (int level = 0; level < r; ++level) {
    const int m = static_cast<int>(d.rows()) - 1;
    MatrixXd next(m, n + 1);
    for (int i = 0; i < m; ++i) next.row(i) = m * (d.row(i + 1) - d.row(i));
    d = next;
  }
  return d;
}

MatrixXd BernsteinGram(int m) {
  MatrixXd g(m + 1, m + 1);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      g(i, j) = static_cast<double>(Binomial(m, i)) * Binomial(m, j) /
                (static_cast<double>(Binomial(2 * m, i + j)) * (2 * m + 1));
    }
  }
  return g;
}

Objective BuildObjective(const CorridorSequence& seq,
                         const ReferenceTrajectory& ref, const Weights& weights,
                         int order) {
  const int n = order;
  ControlLayout layout{n, seq.size()};
  const int nv = layout.num_vars();
  const auto h = RegionDurations(seq);
  Objective obj;
  obj.q = VectorXd::Zero(nv);
  std::vector<Eigen::Triplet<double>> triplets;

  for (int k = 0; k < seq.size(); ++k) {
    const double t0 = seq.StartTime(k);
    const double hk = h[k];
    for (int d = 0; d < 2; ++d) {
      const int base = d * 5;  // w1..w5 or w6..w10
      MatrixXd block = MatrixXd::Zero(n + 1, n + 1);
      VectorXd lin = VectorXd::Zero(n + 1);
      for (int r = 0; r <= 3 && r <= n; ++r) {
        const double w = weights[base + r + 1];
        if (w == 0.0) continue;
        const MatrixXd dr = DerivativeOperator(n, r);
        block += w * std::pow(hk, 1 - 2 * r) *
                 (dr.transpose() * BernsteinGram(n - r) * dr);
        if (r >= 2) continue;
        // Cross and constant terms against the reference.
        VectorXd u = VectorXd::Zero(n + 1 - r);
        double sq = 0.0;
        ForEachQuadraturePoint(t0, t0 + hk, ref.dt,
                               [&](double t, double wq, double mid) {
          const double g = r == 0 ? RefPosition(ref, d, t)
                                  : RefVelocity(ref, d, mid);
          const double tau = std::clamp((t - t0) / hk, 0.0, 1.0);
          for (int i = 0; i <= n - r; ++i) {
            u[i] += wq * g * EvalBernstein(n - r, i, tau);
          }
          sq += wq * g * g;
        });
        lin += w * std::pow(hk, -r) * (dr.transpose() * u);
        obj.constant += w * sq;
      }
      if (k + 1 == seq.size()) {
        const double w = weights[base + 5];
        const double target = RefPosition(ref, d, seq.EndTime(k));
        block(n, n) += w;
        lin[n] += w * target;
        obj.constant += w * target * target;
      }
      MatrixXd qb = block + block.transpose();  // 2 * symmetrized block
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(qb, Eigen::EigenvaluesOnly);
      const double min_eig = eig.eigenvalues().minCoeff();
      // Blocks are semidefinite; only undo round-off below zero.
      if (min_eig < 0.0) qb -= min_eig * MatrixXd::Identity(n + 1, n + 1);
      for (int i = 0; i <= n; ++i) {
        const int row = layout.Index(k, d, i);
        obj.q[row] = -2.0 * lin[i];
        for (int j = 0; j <= n; ++j) {
          if (qb(i, j) != 0.0) {
            triplets.emplace_back(row, layout.Index(k, d, j), qb(i, j));
          }
        }
      }
    }
  }
  obj.Q.resize(nv, nv);
  obj.Q.setFromTriplets(triplets.begin(), triplets.end());
  return obj;
}

double IntegrateCost(const PiecewiseBezierTrajectory& traj,
                     const ReferenceTrajectory& ref, const Weights& weights) {
  double cost = 0.0;
  for (const auto& piece : traj.pieces) {
    ForEachQuadraturePoint(piece.knot, piece.End(), ref.dt,
                           [&](double t, double wq, double mid) {
      std::array<std::array<double, 2>, 4> deriv;
      for (int r = 0; r < 4; ++r) deriv[r] = piece.Eval(t, r);
      for (int d = 0; d < 2; ++d) {
        const int base = d * 5;
        const double ep = deriv[0][d] - RefPosition(ref, d, t);
        const double ev = deriv[1][d] - RefVelocity(ref, d, mid);
        cost += wq * (weights[base + 1] * ep * ep + weights[base + 2] * ev * ev +
                      weights[base + 3] * deriv[2][d] * deriv[2][d] +
                      weights[base + 4] * deriv[3][d] * deriv[3][d]);
      }
    });
  }
  const double t_end = traj.Horizon();
  const auto end = traj.Eval(t_end);
  for (int d = 0; d < 2; ++d) {
    const double e = end[d] - RefPosition(ref, d, t_end);
    cost += weights[d * 5 + 5] * e * e;
  }
  return cost;
}

ConstraintBlock BuildBoundaryConstraints(const EgoState& ego,
                                         const ControlLayout& layout,
                                         double h0) {
  ConstraintBlock block;
  const double values[2][3] = {{ego.s, ego.vs, ego.as}, {ego.l, ego.vl, ego.al}};
  for (int d = 0; d < 2; ++d) {
    for (int r = 0; r <= 2; ++r) {
      block.AddRow(DerivativeRow(layout, 0, d, r, 0, h0), values[d][r],
                   {ConstraintFamily::kBoundary, 0, d});
    }
  }
  return block;
}

ConstraintBlock BuildContinuityConstraints(const CorridorSequence& seq,
                                           const ControlLayout& layout) {
  ConstraintBlock block;
  const int n = layout.order;
  const auto h = RegionDurations(seq);
  for (int k = 0; k + 1 < seq.size(); ++k) {
    for (int d = 0; d < 2; ++d) {
      for (int r = 0; r <= 2; ++r) {
        auto row = DerivativeRow(layout, k, d, r, n - r, h[k]);
        const auto next = DerivativeRow(layout, k + 1, d, r, 0, h[k + 1], -1.0);
        row.insert(row.end(), next.begin(), next.end());
        block.AddRow(row, 0.0, {ConstraintFamily::kContinuity, k, d});
      }
    }
  }
  return block;
}

ConstraintBlock BuildSafetyConstraints(const CorridorSequence& seq,
                                       CorridorMode mode,
                                       const ControlLayout& layout,
                                       bool* infeasible) {
  ConstraintBlock block;
  const int n = layout.order;
  const MatrixXd m = TransitionMatrix(n);
  if (infeasible) *infeasible = false;
  for (int k = 0; k < seq.size(); ++k) {
    const ConvexRegion region = mode == CorridorMode::kCuboidal
                                    ? InscribeCuboid(seq.regions[k])
                                    : seq.regions[k];
    if (!region.feasible && infeasible) *infeasible = true;
    const double h = seq.EndTime(k) - seq.StartTime(k);
    for (int i = 0; i <= n; ++i) {
      const int s_idx = layout.Index(k, 0, i);
      const int l_idx = layout.Index(k, 1, i);
      const double lower = region.lbias + h * region.lskew * m(i, 1);
      const double upper = region.ubias + h * region.uskew * m(i, 1);
      block.AddRow({{s_idx, -1.0}}, -lower, {ConstraintFamily::kSafetyS, k, 0});
      block.AddRow({{s_idx, 1.0}}, upper, {ConstraintFamily::kSafetyS, k, 0});
      block.AddRow({{l_idx, -1.0}}, -region.l_beg,
                   {ConstraintFamily::kSafetyL, k, 1});
      block.AddRow({{l_idx, 1.0}}, region.l_end,
                   {ConstraintFamily::kSafetyL, k, 1});
    }
  }
  return block;
}

double SpeedCap(const ConvexRegion& region, const RoadSpec& road,
                const PhysicalLimits& limits) {
  double cap = std::min(limits.velocity_s.hi, road.speed_limit);
  const double s_lo = std::max(
      road.s_min, std::min(region.LowerAt(0.0), region.LowerAt(region.t)));
  const double s_hi = std::min(
      road.s_max, std::max(region.UpperAt(0.0), region.UpperAt(region.t)));
  const double kappa = road.MaxCurvature(s_lo, s_hi);
  if (kappa > 0.0) cap = std::min(cap, std::sqrt(limits.a_cm / kappa));
  return cap;
}

ConstraintBlock BuildPhysicalConstraints(const CorridorSequence& seq,
                                         const RoadSpec& road,
                                         const PhysicalLimits& limits,
                                         const ControlLayout& layout) {
  ConstraintBlock block;
  const auto h = RegionDurations(seq);
  for (int k = 0; k < seq.size(); ++k) {
    const double cap = SpeedCap(seq.regions[k], road, limits);
    AddBoundsRows(&block, layout, k, 0, 1, h[k], limits.velocity_s.lo, cap,
                  ConstraintFamily::kVelocity);
    AddBoundsRows(&block, layout, k, 1, 1, h[k], limits.velocity_l.lo,
                  limits.velocity_l.hi, ConstraintFamily::kVelocity);
    AddBoundsRows(&block, layout, k, 0, 2, h[k], limits.acceleration_s.lo,
                  limits.acceleration_s.hi, ConstraintFamily::kAcceleration);
    AddBoundsRows(&block, layout, k, 1, 2, h[k], limits.acceleration_l.lo,
                  limits.acceleration_l.hi, ConstraintFamily::kAcceleration);
    if (layout.order >= 3) {
      AddBoundsRows(&block, layout, k, 0, 3, h[k], limits.jerk_s.lo,
                    limits.jerk_s.hi, ConstraintFamily::kJerk);
      AddBoundsRows(&block, layout, k, 1, 3, h[k], limits.jerk_l.lo,
                    limits.jerk_l.hi, ConstraintFamily::kJerk);
    }
  }
  return block;
}

AssembledQp AssembleQp(const Scenario& sc, const CorridorSequence& seq,
                       const ReferenceTrajectory& ref, CorridorMode mode,
                       const Weights& weights, const PhysicalLimits& limits,
                       int order) {
  if (seq.size() == 0) {
    throw PlannerError(ErrorKind::kDegenerateInput, "empty corridor sequence");
  }
  if (order < 3) {
    throw PlannerError(ErrorKind::kDegenerateInput,
                       "Bezier order must be at least 3");
  }
  weights.Validate();
  limits.Validate();
  AssembledQp qp;
  qp.layout = {order, seq.size()};
  qp.durations = RegionDurations(seq);
  for (int k = 0; k < seq.size(); ++k) qp.knots.push_back(seq.StartTime(k));
  const int nv = qp.layout.num_vars();

  Objective obj = BuildObjective(seq, ref, weights, order);
  qp.problem.Q = std::move(obj.Q);
  qp.problem.q = std::move(obj.q);
  qp.problem.constant = obj.constant;

  ConstraintBlock eq = BuildBoundaryConstraints(sc.ego, qp.layout, qp.durations[0]);
  eq.Append(BuildContinuityConstraints(seq, qp.layout));

  bool cuboid_empty = false;
  ConstraintBlock all_ie = BuildSafetyConstraints(seq, mode, qp.layout, &cuboid_empty);
  all_ie.Append(BuildPhysicalConstraints(seq, sc.road, limits, qp.layout));
  if (cuboid_empty) qp.infeasible_family = ConstraintFamily::kSafetyS;

  // Rows touching only boundary-pinned control points are decided now.
  const VectorXd pinned = PinnedControlPoints(sc.ego, qp.layout, qp.durations[0]);
  std::vector<std::vector<std::pair<int, double>>> rows(all_ie.rows());
  for (const auto& e : all_ie.entries) rows[e.row()].emplace_back(e.col(), e.value());
  ConstraintBlock ie;
  for (int r = 0; r < all_ie.rows(); ++r) {
    bool fixed = true;
    double value = 0.0;
    for (const auto& [col, coeff] : rows[r]) {
      if (std::isnan(pinned[col])) {
        fixed = false;
        break;
      }
      value += coeff * pinned[col];
    }
    if (!fixed) {
      ie.AddRow(rows[r], all_ie.rhs[r], all_ie.tags[r]);
      continue;
    }
    qp.fixed_rows.AddRow(rows[r], all_ie.rhs[r], all_ie.tags[r]);
    if (value > all_ie.rhs[r] + kFixedRowTolerance * (1.0 + std::abs(all_ie.rhs[r])) &&
        !qp.infeasible_family) {
      qp.infeasible_family = all_ie.tags[r].family;
    }
  }

  qp.problem.A_eq = ToSparse(eq, nv);
  qp.problem.b_eq = ToVector(eq.rhs);
  qp.problem.A_ie = ToSparse(ie, nv);
  qp.problem.b_ie = ToVector(ie.rhs);
  qp.eq_tags = std::move(eq.tags);
  qp.ie_tags = std::move(ie.tags);
  return qp;
}

double PlanResult::MaxViolation() const {
  return *std::max_element(max_violation.begin(), max_violation.end());
}

std::array<double, kNumConstraintFamilies> FamilyViolations(
    const AssembledQp& qp, const VectorXd& x) {
  std::array<double, kNumConstraintFamilies> out{};
  auto record = [&](ConstraintFamily f, double v) {
    double& slot = out[static_cast<int>(f)];
    slot = std::max(slot, v);
  };
  const VectorXd eq = qp.problem.A_eq * x - qp.problem.b_eq;
  for (int r = 0; r < eq.size(); ++r) record(qp.eq_tags[r].family, std::abs(eq[r]));
  const VectorXd ie = qp.problem.A_ie * x - qp.problem.b_ie;
  for (int r = 0; r < ie.size(); ++r) record(qp.ie_tags[r].family, std::max(0.0, ie[r]));
  const VectorXd fx =
      ToSparse(qp.fixed_rows, qp.layout.num_vars()) * x - ToVector(qp.fixed_rows.rhs);
  for (int r = 0; r < fx.size(); ++r) {
    record(qp.fixed_rows.tags[r].family, std::max(0.0, fx[r]));
  }
  return out;
}

PiecewiseBezierTrajectory ToTrajectory(const AssembledQp& qp, const VectorXd& x) {
  PiecewiseBezierTrajectory traj;
  const int n = qp.layout.order;
  for (int k = 0; k < qp.layout.pieces; ++k) {
    BezierPiece piece;
    piece.order = n;
    piece.h = qp.durations[k];
    piece.knot = qp.knots[k];
    for (int i = 0; i <= n; ++i) {
      piece.s.push_back(x[qp.layout.Index(k, 0, i)] / piece.h);
      piece.l.push_back(x[qp.layout.Index(k, 1, i)] / piece.h);
    }
    traj.pieces.push_back(std::move(piece));
  }
  return traj;
}

PlanResult Solve(const AssembledQp& qp, const QpBackend& backend) {
  PlanResult result;
  if (qp.infeasible_family) {
    result.status = QpStatus::kInfeasible;
    result.violated_family = qp.infeasible_family;
    return result;
  }
  const auto start = std::chrono::steady_clock::now();
  const QpSolution sol = backend.Solve(qp.problem);
  result.solve_time_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  result.iterations = sol.iterations;
  if (sol.x.size() == qp.layout.num_vars() && sol.x.allFinite()) {
    result.max_violation = FamilyViolations(qp, sol.x);
  }
  const auto worst = std::max_element(result.max_violation.begin(),
                                      result.max_violation.end());
  const auto worst_family =
      static_cast<ConstraintFamily>(worst - result.max_violation.begin());

  if (sol.status == QpStatus::kOptimal) {
    if (*worst > kFeasibilityTolerance) {
      // Never report an unverified point as optimal.
      result.status = QpStatus::kSolverLimit;
      result.violated_family = worst_family;
      return result;
    }
    result.status = QpStatus::kOptimal;
    result.objective = sol.objective;
    result.trajectory = ToTrajectory(qp, sol.x);
    return result;
  }
  result.status = sol.status;
  if (sol.status == QpStatus::kInfeasible && *worst > 0.0) {
    result.violated_family = worst_family;
  }
  return result;
}

}  // namespace stcorridor
