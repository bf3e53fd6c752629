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

// Fixtures, random inputs and reference implementations shared by the tests.
// The oracles here deliberately avoid the library's own algebra.

#ifndef STCORRIDOR_TESTS_TEST_SUPPORT_H_
#define STCORRIDOR_TESTS_TEST_SUPPORT_H_

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stcorridor/bezier.h"
#include "stcorridor/corridor.h"
#include "stcorridor/qpopt.h"
#include "stcorridor/scenario.h"

namespace stcorridor::testing {

std::string FixturePath(const std::string& name);
Scenario LoadFixture(const std::string& name);

// Two-lane road with up to three random traffic participants. Many draws
// admit no reference; callers skip those.
Scenario RandomScenario(std::mt19937_64& rng);

// Random region with positive width at both ends.
ConvexRegion RandomRegion(std::mt19937_64& rng);

// Power-basis coefficients a_j of sum_i c_i b_n^i(t) = sum_j a_j t^j.
std::vector<double> BernsteinToPower(const std::vector<double>& control);

// r-th derivative of a power-basis polynomial at t.
double EvalPower(const std::vector<double>& coeffs, double t, int r = 0);

// Piecewise cost of a scaled control-point vector, integrated with composite
// Simpson on every reference sub-interval of every piece.
double DirectCost(const Eigen::VectorXd& x, const AssembledQp& qp,
                  const ReferenceTrajectory& reference,
                  const Weights& weights);

struct Segment {
  double t_beg;
  double t_end;
  double lbias;
  double lskew;
  double ubias;
  double uskew;
};

// Splits sampled bound profiles where a meta-piece slope departs from the
// first slope of the running segment by more than eps, then cuts every
// segment longer than `threshold` seconds into equal parts.
std::vector<Segment> BruteForceSegments(const std::vector<double>& lb,
                                        const std::vector<double>& ub,
                                        double dt, double eps,
                                        double threshold);

// Largest distance by which uniformly sampled trajectory points leave the
// corridor (0 when always inside).
double CorridorViolation(const CorridorSequence& corridors,
                         const PiecewiseBezierTrajectory& trajectory,
                         int samples);

// Max |a_s| and |a_l| over samples at the given rate.
struct PeakAcceleration {
  double as = 0.0;
  double al = 0.0;
};
PeakAcceleration PeakAccelerations(const PiecewiseBezierTrajectory& trajectory,
                                   double rate_hz);

}  // namespace stcorridor::testing

#endif  // STCORRIDOR_TESTS_TEST_SUPPORT_H_
