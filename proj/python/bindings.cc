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

#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stcorridor/bezier.h"
#include "stcorridor/common.h"
#include "stcorridor/corridor.h"
#include "stcorridor/planner.h"
#include "stcorridor/report.h"
#include "stcorridor/scenario.h"

namespace py = pybind11;

namespace stcorridor {
namespace {

PlannerConfig MakeConfig(const std::string& weights, const std::string& limits,
                         const std::string& margins) {
  PlannerConfig config;
  ApplyWeightOverrides(weights, &config.weights);
  ApplyLimitOverrides(limits, &config.limits);
  ApplyMarginOverrides(margins, &config.margins);
  return config;
}

py::dict RegionDict(const CorridorSequence& seq, int k) {
  const ConvexRegion& r = seq.regions[k];
  py::dict d;
  d["t_start"] = seq.StartTime(k);
  d["t_end"] = seq.EndTime(k);
  d["lbias"] = r.lbias;
  d["lskew"] = r.lskew;
  d["ubias"] = r.ubias;
  d["uskew"] = r.uskew;
  d["l_beg"] = r.l_beg;
  d["l_end"] = r.l_end;
  d["feasible"] = r.feasible;
  return d;
}

py::list RegionList(const CorridorSequence& seq) {
  py::list out;
  for (int k = 0; k < seq.size(); ++k) out.append(RegionDict(seq, k));
  return out;
}

py::dict ModeDict(const ModeReport& m) {
  py::dict d;
  d["status"] = std::string(QpStatusName(m.status));
  d["objective"] = m.status == QpStatus::kOptimal ? py::cast(m.objective)
                                                  : py::none();
  d["max_abs_as"] = m.max_abs_as;
  d["max_abs_al"] = m.max_abs_al;
  d["max_vs"] = m.max_vs;
  d["corridor_count"] = m.corridor_count;
  d["solve_time_ms"] = m.solve_time_ms;
  d["violated_family"] =
      m.violated_family
          ? py::cast(std::string(ConstraintFamilyName(*m.violated_family)))
          : py::none();
  py::array_t<double> samples({static_cast<py::ssize_t>(m.samples.size()),
                               static_cast<py::ssize_t>(9)});
  auto view = samples.mutable_unchecked<2>();
  for (size_t i = 0; i < m.samples.size(); ++i) {
    for (int j = 0; j < 9; ++j) view(i, j) = m.samples[i][j];
  }
  d["samples"] = samples;
  return d;
}

py::dict PlanScenario(const Scenario& sc, const std::string& mode,
                      double rate_hz, const std::string& weights,
                      const std::string& limits, const std::string& margins) {
  const RunReport report = RunScenario(
      sc, ParseRunMode(mode), MakeConfig(weights, limits, margins), rate_hz);
  py::dict out;
  for (const auto& m : report.modes) {
    out[py::str(std::string(CorridorModeName(m.mode)))] = ModeDict(m);
  }
  return out;
}

}  // namespace
}  // namespace stcorridor

PYBIND11_MODULE(_stcorridor, m) {
  using namespace stcorridor;
  m.doc() = "Trajectory planning through trapezoidal or cuboidal corridors.";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object>
      storage;
  storage.call_once_and_store_result([&]() {
    return py::object(py::exception<PlannerError>(m, "PlannerError"));
  });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const PlannerError& e) {
      const py::object& type = storage.get_stored();
      py::object err = type(e.what());
      err.attr("kind") = std::string(ErrorKindName(e.kind()));
      err.attr("field") = e.field();
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  m.def("validate_scenario",
        [](const std::string& json_text) {
          ValidateScenario(ParseScenario(json_text));
        },
        py::arg("json_text"),
        "Raises PlannerError naming the offending field.");

  m.def("plan",
        [](const std::string& path, const std::string& mode, double rate_hz,
           const std::string& weights, const std::string& limits,
           const std::string& margins) {
          return PlanScenario(LoadScenario(path), mode, rate_hz, weights,
                              limits, margins);
        },
        py::arg("path"), py::arg("mode") = "both", py::arg("rate_hz") = 100.0,
        py::arg("weights") = "", py::arg("limits") = "",
        py::arg("margins") = "",
        "Plans a scenario file. Returns {mode name: result dict}; samples "
        "are rows of t, s, l, vs, vl, as, al, js, jl.");

  m.def("plan_json",
        [](const std::string& json_text, const std::string& mode,
           double rate_hz, const std::string& weights,
           const std::string& limits, const std::string& margins) {
          return PlanScenario(ParseScenario(json_text), mode, rate_hz, weights,
                              limits, margins);
        },
        py::arg("json_text"), py::arg("mode") = "both",
        py::arg("rate_hz") = 100.0, py::arg("weights") = "",
        py::arg("limits") = "", py::arg("margins") = "");

  m.def("compare",
        [](const std::string& path) {
          return Compare(RunScenario(LoadScenario(path), RunMode::kBoth,
                                     PlannerConfig{}));
        },
        py::arg("path"));

  m.def("corridors",
        [](const std::string& path, const std::string& mode) {
          const Scenario sc = LoadScenario(path);
          const CorridorArtifacts art = BuildCorridorArtifacts(sc, {});
          return RegionList(ParseCorridorMode(mode) == CorridorMode::kCuboidal
                                ? InscribeCuboids(art.corridors)
                                : art.corridors);
        },
        py::arg("path"), py::arg("mode") = "trapezoidal");

  m.def("convexify",
        [](const std::vector<double>& lb, const std::vector<double>& ub,
           double l_beg, double l_end, double dt, double skew_epsilon,
           double split_threshold) {
          CorridorSequence seq;
          seq.dt = dt;
          seq.regions = Convexify2D(lb, ub, l_beg, l_end, dt,
                                    {skew_epsilon, split_threshold});
          return RegionList(seq);
        },
        py::arg("lb"), py::arg("ub"), py::arg("l_beg"), py::arg("l_end"),
        py::arg("dt"), py::arg("skew_epsilon") = 1e-6,
        py::arg("split_threshold") = 1.0);

  m.def("bernstein", &EvalBernstein, py::arg("n"), py::arg("i"), py::arg("t"));
}
