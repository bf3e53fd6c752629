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

#include "stcorridor/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stcorridor/common.h"

namespace stcorridor {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw PlannerError(ErrorKind::kValidation, field + ": " + what, field);
}

void RequireFinite(double value, const std::string& field) {
  if (!std::isfinite(value)) Invalid(field, "must be finite");
}

// Rejects keys of `object` not listed in `allowed`.
void CheckKeys(const json& object, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!object.is_object()) Invalid(where, "expected a JSON object");
  for (const auto& [key, value] : object.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) {
      Invalid(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

double GetNumber(const json& object, const std::string& where,
                 const char* key) {
  const std::string field = where.empty() ? key : where + "." + key;
  auto it = object.find(key);
  if (it == object.end()) Invalid(field, "missing required key");
  if (!it->is_number()) Invalid(field, "expected a number");
  return it->get<double>();
}

const json& GetMember(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) Invalid(key, "missing required key");
  return *it;
}

ObstacleKind ParseKind(const json& value, const std::string& field) {
  if (!value.is_string()) Invalid(field, "expected a string");
  const auto name = value.get<std::string>();
  if (name == "static") return ObstacleKind::kStatic;
  if (name == "longitudinal") return ObstacleKind::kLongitudinal;
  if (name == "longitudinal_lateral") {
    return ObstacleKind::kLongitudinalLateral;
  }
  Invalid(field, "unknown obstacle kind '" + name + "'");
}

}  // namespace

std::string_view ObstacleKindName(ObstacleKind kind) {
  switch (kind) {
    case ObstacleKind::kStatic:
      return "static";
    case ObstacleKind::kLongitudinal:
      return "longitudinal";
    case ObstacleKind::kLongitudinalLateral:
      return "longitudinal_lateral";
  }
  return "static";
}

double RoadSpec::MaxCurvature(double s_from, double s_to) const {
  double kappa = 0.0;
  for (const auto& segment : curvature) {
    if (segment.s_to >= s_from && segment.s_from <= s_to) {
      kappa = std::max(kappa, segment.kappa);
    }
  }
  return kappa;
}

int ReferenceTrajectory::SegmentAt(double time) const {
  const int last = size() - 2;
  if (last < 0) return 0;
  const int k = static_cast<int>(std::floor(time / dt + 1e-9));
  return std::clamp(k, 0, last);
}

double ReferenceTrajectory::SAt(double time) const {
  if (size() == 1) return s.front();
  const int k = SegmentAt(time);
  const double tau = std::clamp(time, 0.0, Horizon()) - t[k];
  return s[k] + (s[k + 1] - s[k]) / dt * tau;
}

double ReferenceTrajectory::LAt(double time) const {
  if (size() == 1) return l.front();
  const int k = SegmentAt(time);
  const double tau = std::clamp(time, 0.0, Horizon()) - t[k];
  return l[k] + (l[k + 1] - l[k]) / dt * tau;
}

double ReferenceTrajectory::VsAt(double time) const {
  return vs[SegmentAt(time)];
}

double ReferenceTrajectory::VlAt(double time) const {
  return vl[SegmentAt(time)];
}

int Scenario::NumSamples() const {
  return static_cast<int>(std::lround(horizon / dt)) + 1;
}

void ValidateScenario(const Scenario& sc) {
  const EgoState& e = sc.ego;
  RequireFinite(e.s, "ego.s");
  RequireFinite(e.l, "ego.l");
  RequireFinite(e.vs, "ego.vs");
  RequireFinite(e.vl, "ego.vl");
  RequireFinite(e.as, "ego.as");
  RequireFinite(e.al, "ego.al");

  const RoadSpec& r = sc.road;
  RequireFinite(r.s_min, "road.s_min");
  RequireFinite(r.s_max, "road.s_max");
  RequireFinite(r.l_min, "road.l_min");
  RequireFinite(r.l_max, "road.l_max");
  RequireFinite(r.speed_limit, "road.speed_limit");
  if (!(r.s_min < r.s_max)) Invalid("road.s_max", "must exceed road.s_min");
  if (!(r.l_min < r.l_max)) Invalid("road.l_max", "must exceed road.l_min");
  if (!(r.speed_limit > 0.0)) Invalid("road.speed_limit", "must be positive");
  for (size_t i = 0; i < r.curvature.size(); ++i) {
    const std::string f = "road.curvature[" + std::to_string(i) + "]";
    const auto& c = r.curvature[i];
    RequireFinite(c.s_from, f + ".s_from");
    RequireFinite(c.s_to, f + ".s_to");
    RequireFinite(c.kappa, f + ".kappa");
    if (c.kappa < 0.0) Invalid(f + ".kappa", "must be non-negative");
    if (c.s_to < c.s_from) Invalid(f + ".s_to", "must not precede s_from");
  }

  if (std::abs(e.vs) > r.speed_limit) {
    Invalid("ego.vs", "exceeds road.speed_limit");
  }
  if (e.s < r.s_min || e.s > r.s_max) Invalid("ego.s", "outside road");
  if (e.l < r.l_min || e.l > r.l_max) Invalid("ego.l", "outside road");

  for (size_t i = 0; i < sc.obstacles.size(); ++i) {
    const std::string f = "obstacles[" + std::to_string(i) + "]";
    const auto& o = sc.obstacles[i];
    RequireFinite(o.length, f + ".length");
    RequireFinite(o.width, f + ".width");
    RequireFinite(o.s, f + ".s");
    RequireFinite(o.l, f + ".l");
    RequireFinite(o.vs, f + ".vs");
    RequireFinite(o.vl, f + ".vl");
    if (!(o.length > 0.0)) Invalid(f + ".length", "must be positive");
    if (!(o.width > 0.0)) Invalid(f + ".width", "must be positive");
    if (o.kind == ObstacleKind::kStatic && o.vs != 0.0) {
      Invalid(f + ".vs", "static obstacle must have vs = 0");
    }
    if (o.kind != ObstacleKind::kLongitudinalLateral && o.vl != 0.0) {
      Invalid(f + ".vl", "obstacle kind requires vl = 0");
    }
  }

  RequireFinite(sc.horizon, "horizon");
  RequireFinite(sc.dt, "dt");
  if (!(sc.horizon > 0.0)) Invalid("horizon", "must be positive");
  if (!(sc.dt > 0.0)) Invalid("dt", "must be positive");
  const double steps = sc.horizon / sc.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps) ||
      std::round(steps) < 1.0) {
    Invalid("dt", "horizon / dt must be a positive integer");
  }

  const GoalRegion& g = sc.goal;
  RequireFinite(g.s_min, "goal.s_min");
  RequireFinite(g.s_max, "goal.s_max");
  RequireFinite(g.l_min, "goal.l_min");
  RequireFinite(g.l_max, "goal.l_max");
  if (g.s_min > g.s_max) Invalid("goal.s_max", "must not be below goal.s_min");
  if (g.l_min > g.l_max) Invalid("goal.l_max", "must not be below goal.l_min");
}

Scenario ParseScenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw PlannerError(ErrorKind::kParse, e.what());
  }

  CheckKeys(doc, "", {"ego", "road", "obstacles", "horizon", "dt", "goal"});
  Scenario sc;

  const json& ego = GetMember(doc, "ego");
  CheckKeys(ego, "ego", {"s", "l", "vs", "vl", "as", "al"});
  sc.ego = {GetNumber(ego, "ego", "s"),  GetNumber(ego, "ego", "l"),
            GetNumber(ego, "ego", "vs"), GetNumber(ego, "ego", "vl"),
            GetNumber(ego, "ego", "as"), GetNumber(ego, "ego", "al")};

  const json& road = GetMember(doc, "road");
  CheckKeys(road, "road",
            {"s_min", "s_max", "l_min", "l_max", "speed_limit", "curvature"});
  sc.road.s_min = GetNumber(road, "road", "s_min");
  sc.road.s_max = GetNumber(road, "road", "s_max");
  sc.road.l_min = GetNumber(road, "road", "l_min");
  sc.road.l_max = GetNumber(road, "road", "l_max");
  sc.road.speed_limit = GetNumber(road, "road", "speed_limit");
  if (auto it = road.find("curvature"); it != road.end()) {
    if (!it->is_array()) Invalid("road.curvature", "expected an array");
    for (size_t i = 0; i < it->size(); ++i) {
      const std::string f = "road.curvature[" + std::to_string(i) + "]";
      const json& seg = (*it)[i];
      CheckKeys(seg, f, {"s_from", "s_to", "kappa"});
      sc.road.curvature.push_back({GetNumber(seg, f, "s_from"),
                                   GetNumber(seg, f, "s_to"),
                                   GetNumber(seg, f, "kappa")});
    }
  }

  const json& obstacles = GetMember(doc, "obstacles");
  if (!obstacles.is_array()) Invalid("obstacles", "expected an array");
  for (size_t i = 0; i < obstacles.size(); ++i) {
    const std::string f = "obstacles[" + std::to_string(i) + "]";
    const json& o = obstacles[i];
    CheckKeys(o, f, {"kind", "length", "width", "s", "l", "vs", "vl"});
    auto kind = o.find("kind");
    if (kind == o.end()) Invalid(f + ".kind", "missing required key");
    ObstaclePrediction p;
    p.kind = ParseKind(*kind, f + ".kind");
    p.length = GetNumber(o, f, "length");
    p.width = GetNumber(o, f, "width");
    p.s = GetNumber(o, f, "s");
    p.l = GetNumber(o, f, "l");
    p.vs = GetNumber(o, f, "vs");
    p.vl = GetNumber(o, f, "vl");
    sc.obstacles.push_back(p);
  }

  sc.horizon = GetNumber(doc, "", "horizon");
  sc.dt = GetNumber(doc, "", "dt");

  const json& goal = GetMember(doc, "goal");
  CheckKeys(goal, "goal", {"s_min", "s_max", "l_min", "l_max"});
  sc.goal = {GetNumber(goal, "goal", "s_min"), GetNumber(goal, "goal", "s_max"),
             GetNumber(goal, "goal", "l_min"),
             GetNumber(goal, "goal", "l_max")};

  ValidateScenario(sc);
  return sc;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PlannerError(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

std::string SerializeScenario(const Scenario& sc) {
  json doc;
  doc["ego"] = {{"s", sc.ego.s},   {"l", sc.ego.l},   {"vs", sc.ego.vs},
                {"vl", sc.ego.vl}, {"as", sc.ego.as}, {"al", sc.ego.al}};
  json curvature = json::array();
  for (const auto& c : sc.road.curvature) {
    curvature.push_back(
        {{"s_from", c.s_from}, {"s_to", c.s_to}, {"kappa", c.kappa}});
  }
  doc["road"] = {{"s_min", sc.road.s_min},
                 {"s_max", sc.road.s_max},
                 {"l_min", sc.road.l_min},
                 {"l_max", sc.road.l_max},
                 {"speed_limit", sc.road.speed_limit},
                 {"curvature", curvature}};
  json obstacles = json::array();
  for (const auto& o : sc.obstacles) {
    obstacles.push_back({{"kind", std::string(ObstacleKindName(o.kind))},
                         {"length", o.length},
                         {"width", o.width},
                         {"s", o.s},
                         {"l", o.l},
                         {"vs", o.vs},
                         {"vl", o.vl}});
  }
  doc["obstacles"] = obstacles;
  doc["horizon"] = sc.horizon;
  doc["dt"] = sc.dt;
  doc["goal"] = {{"s_min", sc.goal.s_min},
                 {"s_max", sc.goal.s_max},
                 {"l_min", sc.goal.l_min},
                 {"l_max", sc.goal.l_max}};
  return doc.dump(2);
}

}  // namespace stcorridor
