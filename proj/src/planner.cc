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

#include "stcorridor/planner.h"

#include <chrono>
#include <string>
#include <utility>

#include "stcorridor/common.h"

namespace stcorridor {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename F>
auto Stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const PlannerError& e) {
    throw PlannerError(e.kind(), std::string(name) + " stage: " + e.what(),
                       e.field());
  }
}

}  // namespace

CorridorArtifacts BuildCorridorArtifacts(const Scenario& sc,
                                         const PlannerConfig& config) {
  const auto start = Clock::now();
  CorridorArtifacts art;
  art.occupancy = Stage("sltgraph", [&] { return BuildOccupancy(sc, config.margins); });
  ReferenceOptions ref_options = config.reference;
  ref_options.margins = config.margins;
  art.reference = Stage("reference", [&] { return GenerateReference(sc, ref_options); });
  art.slices = Stage("sltgraph", [&] {
    return BuildSlices(sc, art.occupancy, art.reference);
  });
  art.corridors = Stage("corridor", [&] {
    return GenerateRegions3D(sc, art.slices, art.reference, config.corridor);
  });
  art.build_time_ms = MillisSince(start);
  return art;
}

ModePlan PlanMode(const Scenario& sc, const CorridorArtifacts& art,
                  CorridorMode mode, const PlannerConfig& config) {
  ModePlan plan;
  plan.mode = mode;
  plan.corridors = mode == CorridorMode::kCuboidal ? InscribeCuboids(art.corridors)
                                                   : art.corridors;
  const auto start = Clock::now();
  plan.qp = Stage("qpopt", [&] {
    return AssembleQp(sc, art.corridors, art.reference, mode, config.weights,
                      config.limits, config.order);
  });
  plan.assembly_time_ms = MillisSince(start);
  const InteriorPointBackend backend(config.solver);
  plan.result = Stage("qpopt", [&] { return Solve(plan.qp, backend); });
  return plan;
}

ModePlan Plan(const Scenario& sc, CorridorMode mode,
              const PlannerConfig& config) {
  const CorridorArtifacts art = BuildCorridorArtifacts(sc, config);
  return PlanMode(sc, art, mode, config);
}

}  // namespace stcorridor
