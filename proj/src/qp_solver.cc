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

#include "stcorridor/qp_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "stcorridor/common.h"

namespace stcorridor {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

constexpr double kRegularization = 1e-9;
constexpr int kRefinementSteps = 4;
constexpr double kStepFraction = 0.99;
// Iterates whose residuals are all below this are handed to the polisher.
constexpr double kPolishCandidate = 1e-5;

double InfNorm(const VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Divides each row of m (and the matching entry of rhs) by its 2-norm and
// returns the applied factors.
VectorXd NormalizeRows(SparseMatrix* m, VectorXd* rhs) {
  VectorXd norms = VectorXd::Zero(m->rows());
  for (int k = 0; k < m->outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(*m, k); it; ++it) {
      norms[it.row()] += it.value() * it.value();
    }
  }
  VectorXd scale(m->rows());
  for (int i = 0; i < m->rows(); ++i) {
    scale[i] = norms[i] > 0.0 ? 1.0 / std::sqrt(norms[i]) : 1.0;
  }
  *m = scale.asDiagonal() * (*m);
  *rhs = scale.cwiseProduct(*rhs);
  return scale;
}

// Problem data after row normalization. Residuals are judged in the
// original row units: a normalized row residual r_i corresponds to
// r_i / scale_i originally.
struct ScaledQp {
  SparseMatrix Q;
  VectorXd q;
  SparseMatrix A;
  VectorXd b;
  VectorXd a_scale;
  SparseMatrix G;
  VectorXd h;
  VectorXd g_scale;
  // Kept so that relative gap and objective tests see the true magnitude;
  // tracking costs cancel large linear and constant terms.
  double constant = 0.0;

  int n() const { return static_cast<int>(q.size()); }
  int p() const { return static_cast<int>(b.size()); }
  int m() const { return static_cast<int>(h.size()); }
  double Objective(const VectorXd& x) const {
    return 0.5 * x.dot(Q * x) + q.dot(x) + constant;
  }
};

// Largest residual of rows r = Mx - rhs relative to 1 + |rhs| in original
// units. Inequality rows only count positive parts when `one_sided`.
double RowResidual(const VectorXd& r, const VectorXd& rhs,
                   const VectorXd& scale, bool one_sided) {
  double worst = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    const double v = one_sided ? std::max(0.0, r[i]) : std::abs(r[i]);
    worst = std::max(worst, v / (scale[i] + std::abs(rhs[i])));
  }
  return worst;
}

// Quasi-definite KKT system
//   [H + dI   A' ] [dx]   [rx]
//   [A       -dI ] [dy] = [ry],   H = Q + G' W G,
// factored with a sparse LDL' and refined against the unregularized matrix.
class KktSystem {
 public:
  KktSystem(const SparseMatrix& Q, const SparseMatrix& A, const SparseMatrix& G)
      : Q_(Q), A_(A), G_(G), n_(Q.rows()), p_(A.rows()) {}

  bool Factor(const VectorXd& w) {
    w_ = w;
    SparseMatrix wg = w.asDiagonal() * G_;
    SparseMatrix h = Q_ + SparseMatrix(G_.transpose() * wg);
    std::vector<Triplet> triplets;
    triplets.reserve(h.nonZeros() + A_.nonZeros() + n_ + p_);
    for (int k = 0; k < h.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
        if (it.row() >= it.col()) {
          triplets.emplace_back(it.row(), it.col(), it.value());
        }
      }
    }
    for (int k = 0; k < A_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(A_, k); it; ++it) {
        triplets.emplace_back(n_ + it.row(), it.col(), it.value());
      }
    }
    for (int i = 0; i < n_; ++i) triplets.emplace_back(i, i, kRegularization);
    for (int i = 0; i < p_; ++i) {
      triplets.emplace_back(n_ + i, n_ + i, -kRegularization);
    }
    SparseMatrix k(n_ + p_, n_ + p_);
    k.setFromTriplets(triplets.begin(), triplets.end());
    ldlt_.compute(k);
    return ldlt_.info() == Eigen::Success;
  }

  void Solve(const VectorXd& rx, const VectorXd& ry, VectorXd* dx,
             VectorXd* dy) const {
    VectorXd rhs(n_ + p_);
    rhs << rx, ry;
    VectorXd sol = ldlt_.solve(rhs);
    for (int step = 0; step < kRefinementSteps; ++step) {
      const VectorXd res = rhs - Apply(sol);
      if (InfNorm(res) <= 1e-14 * (1.0 + InfNorm(rhs))) break;
      sol += ldlt_.solve(res);
    }
    *dx = sol.head(n_);
    *dy = sol.tail(p_);
  }

 private:
  VectorXd Apply(const VectorXd& v) const {
    const VectorXd x = v.head(n_);
    const VectorXd y = v.tail(p_);
    VectorXd out(n_ + p_);
    out.head(n_) = Q_ * x + G_.transpose() * w_.cwiseProduct(G_ * x) +
                   A_.transpose() * y;
    out.tail(p_) = A_ * x;
    return out;
  }

  const SparseMatrix& Q_;
  const SparseMatrix& A_;
  const SparseMatrix& G_;
  const int n_;
  const int p_;
  VectorXd w_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>
      ldlt_;
};

struct Iterate {
  VectorXd x, y, z, s;
};

struct Residuals {
  double primal = std::numeric_limits<double>::infinity();
  double dual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();

  double Merit() const { return std::max({primal, dual, gap}); }
};

Residuals RelativeResiduals(const ScaledQp& p, const Iterate& it) {
  Residuals r;
  r.primal = std::max(
      RowResidual(p.A * it.x - p.b, p.b, p.a_scale, false),
      RowResidual(p.G * it.x + it.s - p.h, p.h, p.g_scale, false));
  const VectorXd rd =
      p.Q * it.x + p.q + p.A.transpose() * it.y + p.G.transpose() * it.z;
  r.dual = InfNorm(rd) / (1.0 + InfNorm(p.q));
  r.gap = it.s.size() == 0
              ? 0.0
              : it.s.dot(it.z) / (1.0 + std::abs(p.Objective(it.x)));
  return r;
}

double MaxStep(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

struct IpmOutcome {
  Iterate iterate;
  Residuals residuals;
  int iterations = 0;
  bool converged = false;
};

IpmOutcome RunInteriorPoint(const ScaledQp& p, double tolerance,
                            int max_iterations) {
  const int m = p.m();
  KktSystem kkt(p.Q, p.A, p.G);
  IpmOutcome out;
  Iterate& it = out.iterate;

  // Start from the minimizer of the objective plus 0.5 |Gx - h|^2 on Ax = b,
  // then push slacks and multipliers into the positive orthant.
  if (!kkt.Factor(VectorXd::Ones(m))) return out;
  kkt.Solve(-p.q + p.G.transpose() * p.h, p.b, &it.x, &it.y);
  it.s = p.h - p.G * it.x;
  it.z = -it.s;
  if (m == 0) {
    out.residuals = RelativeResiduals(p, it);
    out.converged = out.residuals.Merit() <= tolerance;
    return out;
  }
  const double shift_s = -it.s.minCoeff();
  if (shift_s >= 0.0) it.s.array() += 1.0 + shift_s;
  const double shift_z = -it.z.minCoeff();
  if (shift_z >= 0.0) it.z.array() += 1.0 + shift_z;

  // The best iterate seen so far is returned when progress stops; late
  // iterations can lose accuracy once the complementarity gap underflows.
  // Early iterations may raise the merit temporarily, so the stall rule only
  // applies near convergence.
  Iterate best = it;
  Residuals best_res;
  int since_best = 0;
  auto finish = [&](bool converged) {
    if (!converged) {
      out.iterate = best;
      out.residuals = best_res;
    }
    out.converged = converged;
    return out;
  };

  int stalled = 0;
  for (out.iterations = 0; out.iterations < max_iterations;
       ++out.iterations) {
    out.residuals = RelativeResiduals(p, it);
    if (out.residuals.Merit() <= tolerance) return finish(true);
    if (!it.x.allFinite() || InfNorm(it.x) > 1e12 || InfNorm(it.z) > 1e14) {
      return finish(false);
    }
    if (out.residuals.Merit() < best_res.Merit()) {
      best = it;
      best_res = out.residuals;
      since_best = 0;
    } else if (best_res.Merit() <= kPolishCandidate && ++since_best >= 5) {
      return finish(false);
    }

    const VectorXd rd =
        p.Q * it.x + p.q + p.A.transpose() * it.y + p.G.transpose() * it.z;
    const VectorXd rp = p.A * it.x - p.b;
    const VectorXd rg = p.G * it.x + it.s - p.h;
    const double mu = it.s.dot(it.z) / m;
    const VectorXd w = it.z.cwiseQuotient(it.s);
    if (!kkt.Factor(w)) return finish(false);

    // Newton direction for the complementarity target rc.
    auto direction = [&](const VectorXd& rc, VectorXd* dx, VectorXd* dy,
                         VectorXd* dz, VectorXd* ds) {
      const VectorXd t = (rc + it.z.cwiseProduct(rg)).cwiseQuotient(it.s);
      kkt.Solve(-rd - p.G.transpose() * t, -rp, dx, dy);
      const VectorXd gdx = p.G * *dx;
      *dz = w.cwiseProduct(gdx) + t;
      *ds = -rg - gdx;
    };

    VectorXd dx, dy, dz, ds;
    direction(-it.s.cwiseProduct(it.z), &dx, &dy, &dz, &ds);
    const double alpha_aff = std::min(MaxStep(it.s, ds), MaxStep(it.z, dz));
    const double mu_aff =
        (it.s + alpha_aff * ds).dot(it.z + alpha_aff * dz) / m;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    const VectorXd rc = -it.s.cwiseProduct(it.z) - ds.cwiseProduct(dz) +
                        VectorXd::Constant(m, sigma * mu);
    direction(rc, &dx, &dy, &dz, &ds);
    const double alpha =
        std::min(1.0, kStepFraction * std::min(MaxStep(it.s, ds),
                                               MaxStep(it.z, dz)));
    it.x += alpha * dx;
    it.y += alpha * dy;
    it.z += alpha * dz;
    it.s += alpha * ds;
    stalled = alpha < 1e-10 ? stalled + 1 : 0;
    if (stalled >= 3) return finish(false);
  }
  return finish(false);
}

// Solution of the equality-constrained problem on the active rows. A dense
// rank-revealing factorization tolerates dependent rows; residuals for the
// refinement steps are formed in extended precision because the multipliers
// can be large enough to swamp double-precision residuals.
struct ActiveSetSolve {
  VectorXd x;
  VectorXd lambda;  // equality rows first, then the active rows
};

ActiveSetSolve SolveOnActiveSet(const ScaledQp& p, const MatrixXd& q_dense,
                                const MatrixXd& a_dense,
                                const MatrixXd& g_dense,
                                const std::vector<int>& active) {
  using VectorXl = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const int n = p.n();
  const int np = p.p();
  const int na = static_cast<int>(active.size());
  const int size = n + np + na;
  MatrixXd k = MatrixXd::Zero(size, size);
  k.topLeftCorner(n, n) = q_dense;
  k.block(n, 0, np, n) = a_dense;
  VectorXd rhs(size);
  rhs << -p.q, p.b, VectorXd::Zero(na);
  for (int i = 0; i < na; ++i) {
    k.row(n + np + i).head(n) = g_dense.row(active[i]);
    rhs[n + np + i] = p.h[active[i]];
  }
  k.topRightCorner(n, np + na) = k.bottomLeftCorner(np + na, n).transpose();

  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(k);
  const auto kl = k.cast<long double>();
  const VectorXl rl = rhs.cast<long double>();
  VectorXl sol = cod.solve(rhs).cast<long double>();
  for (int step = 0; step < 3; ++step) {
    const VectorXd res = (rl - kl * sol).cast<double>();
    sol += cod.solve(res).cast<long double>();
  }
  return {sol.head(n).cast<double>(), sol.tail(np + na).cast<double>()};
}

// Snaps the interior-point iterate to a vertex-accurate solution with a short
// primal active-set loop seeded by the rows the iterate treats as active
// (z > s): the most violated inactive row is added, or else the active row
// with the most negative multiplier is dropped, until the KKT conditions hold.
bool Polish(const ScaledQp& p, double tolerance, Iterate* it) {
  constexpr int kMaxRounds = 25;
  const int np = p.p();
  const MatrixXd q_dense = MatrixXd(p.Q);
  const MatrixXd a_dense = MatrixXd(p.A);
  const MatrixXd g_dense = MatrixXd(p.G);
  std::vector<int> active;
  for (int i = 0; i < p.m(); ++i) {
    if (it->z[i] > it->s[i]) active.push_back(i);
  }
  for (int round = 0; round < kMaxRounds; ++round) {
    const ActiveSetSolve sol =
        SolveOnActiveSet(p, q_dense, a_dense, g_dense, active);
    if (!sol.x.allFinite() || !sol.lambda.allFinite()) return false;
    if (RowResidual(p.A * sol.x - p.b, p.b, p.a_scale, false) > tolerance) {
      return false;
    }

    // Most violated row outside the active set, in original units.
    const VectorXd slack = p.G * sol.x - p.h;
    std::vector<bool> is_active(p.m(), false);
    for (int i : active) is_active[i] = true;
    int add = -1;
    double worst = tolerance;
    for (int i = 0; i < p.m(); ++i) {
      const double v = slack[i] / (p.g_scale[i] + std::abs(p.h[i]));
      if (!is_active[i] && v > worst) {
        worst = v;
        add = i;
      }
    }
    if (add >= 0) {
      active.push_back(add);
      continue;
    }

    const int na = static_cast<int>(active.size());
    const double z_tol = 1e-9 * std::max(1.0, InfNorm(sol.lambda));
    int drop = -1;
    double z_min = -z_tol;
    for (int i = 0; i < na; ++i) {
      if (sol.lambda[np + i] < z_min) {
        z_min = sol.lambda[np + i];
        drop = i;
      }
    }
    if (drop >= 0) {
      active.erase(active.begin() + drop);
      continue;
    }

    VectorXd z = VectorXd::Zero(p.m());
    for (int i = 0; i < na; ++i) z[active[i]] = std::max(0.0, sol.lambda[np + i]);
    it->x = sol.x;
    it->y = sol.lambda.head(np);
    it->z = z;
    it->s = (p.h - p.G * sol.x).cwiseMax(0.0);
    return true;
  }
  return false;
}

// Minimizes the largest normalized inequality violation t over Ax = b and
// returns it (or +inf when the auxiliary solve fails). *x receives the
// minimizing point.
double PhaseOneViolation(const ScaledQp& p, double tolerance,
                         int max_iterations, VectorXd* x) {
  const int n = p.n();
  const int m = p.m();
  ScaledQp aux;
  std::vector<Triplet> triplets;
  for (int k = 0; k < p.G.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator e(p.G, k); e; ++e) {
      triplets.emplace_back(e.row(), e.col(), e.value());
    }
  }
  for (int i = 0; i < m; ++i) triplets.emplace_back(i, n, -1.0);
  triplets.emplace_back(m, n, -1.0);
  aux.G.resize(m + 1, n + 1);
  aux.G.setFromTriplets(triplets.begin(), triplets.end());
  aux.h.resize(m + 1);
  aux.h << p.h, 1.0;
  aux.g_scale = VectorXd::Ones(m + 1);

  std::vector<Triplet> eq;
  for (int k = 0; k < p.A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator e(p.A, k); e; ++e) {
      eq.emplace_back(e.row(), e.col(), e.value());
    }
  }
  aux.A.resize(p.p(), n + 1);
  aux.A.setFromTriplets(eq.begin(), eq.end());
  aux.b = p.b;
  aux.a_scale = VectorXd::Ones(p.p());
  aux.Q.resize(n + 1, n + 1);
  aux.q = VectorXd::Zero(n + 1);
  aux.q[n] = 1.0;
  const IpmOutcome res = RunInteriorPoint(aux, tolerance, max_iterations);
  // A nearly converged point already pins t* to within the merit.
  if (!res.converged && res.residuals.Merit() > std::sqrt(tolerance)) {
    return std::numeric_limits<double>::infinity();
  }
  *x = res.iterate.x.head(n);
  return res.iterate.x[n];
}

}  // namespace

std::string_view QpStatusName(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kInfeasible:
      return "infeasible";
    case QpStatus::kSolverLimit:
      return "solver-limit";
  }
  return "unknown";
}

double QpProblem::Objective(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(Q * x) + q.dot(x) + constant;
}

void QpProblem::CheckDimensions() const {
  const int n = num_vars();
  const bool ok = Q.rows() == n && Q.cols() == n && A_eq.cols() == n &&
                  A_ie.cols() == n && A_eq.rows() == b_eq.size() &&
                  A_ie.rows() == b_ie.size();
  if (!ok) {
    throw PlannerError(ErrorKind::kDegenerateInput,
                       "QP block dimensions are inconsistent");
  }
}

QpSolution InteriorPointBackend::Solve(const QpProblem& problem) const {
  problem.CheckDimensions();
  // Variables are rescaled to a unit Hessian diagonal (x = D x'), then every
  // constraint row to unit norm.
  const SparseMatrix q_sym =
      0.5 * (problem.Q + SparseMatrix(problem.Q.transpose()));
  const VectorXd diag = q_sym.diagonal();
  const double diag_max = diag.size() > 0 ? diag.maxCoeff() : 0.0;
  VectorXd col(problem.num_vars());
  for (int j = 0; j < col.size(); ++j) {
    col[j] = diag[j] > 1e-12 * diag_max ? 1.0 / std::sqrt(diag[j]) : 1.0;
  }
  ScaledQp p;
  p.Q = col.asDiagonal() * q_sym * col.asDiagonal();
  p.q = col.cwiseProduct(problem.q);
  p.constant = problem.constant;
  p.A = problem.A_eq * col.asDiagonal();
  p.b = problem.b_eq;
  p.a_scale = NormalizeRows(&p.A, &p.b);
  p.G = problem.A_ie * col.asDiagonal();
  p.h = problem.b_ie;
  p.g_scale = NormalizeRows(&p.G, &p.h);

  QpSolution sol;
  IpmOutcome ipm =
      RunInteriorPoint(p, settings_.tolerance, settings_.max_iterations);
  sol.iterations = ipm.iterations;
  if (settings_.polish && p.m() > 0 &&
      ipm.residuals.Merit() <= kPolishCandidate) {
    sol.polished = Polish(p, settings_.tolerance, &ipm.iterate);
  }

  // Unpolished iterates are accepted on a looser tolerance; the caller
  // verifies feasibility independently.
  const bool usable =
      sol.polished || ipm.converged ||
      ipm.residuals.Merit() <= std::sqrt(settings_.tolerance);
  if (!usable) {
    VectorXd x = ipm.iterate.x;
    const double violation = PhaseOneViolation(
        p, settings_.tolerance, settings_.max_iterations, &x);
    sol.x = col.cwiseProduct(x);
    sol.status = std::isfinite(violation) &&
                         violation > settings_.infeasibility_tolerance
                     ? QpStatus::kInfeasible
                     : QpStatus::kSolverLimit;
    return sol;
  }

  sol.status = QpStatus::kOptimal;
  sol.x = col.cwiseProduct(ipm.iterate.x);
  sol.y = p.a_scale.cwiseProduct(ipm.iterate.y);
  sol.z = p.g_scale.cwiseProduct(ipm.iterate.z);
  sol.objective = problem.Objective(sol.x);
  double primal = InfNorm(problem.A_eq * sol.x - problem.b_eq);
  if (problem.b_ie.size() > 0) {
    primal = std::max(primal,
                      (problem.A_ie * sol.x - problem.b_ie).maxCoeff());
  }
  sol.primal_residual = std::max(0.0, primal);
  sol.dual_residual =
      InfNorm(q_sym * sol.x + problem.q + problem.A_eq.transpose() * sol.y +
              problem.A_ie.transpose() * sol.z);
  return sol;
}

}  // namespace stcorridor
