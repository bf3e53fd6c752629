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

#include "stcorridor/report.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "stcorridor/common.h"

namespace stcorridor {
namespace {

using Clock = std::chrono::steady_clock;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Round-trip precision; QP objectives cancel large terms.
std::string ExactNum(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Parses "k=v,k=v" and hands each pair to `apply`.
void ForEachOverride(std::string_view spec, std::string_view what,
                     const std::function<void(const std::string&, double)>& apply) {
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string item = Trim(spec.substr(pos, comma - pos));
    pos = comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw PlannerError(ErrorKind::kParse,
                         std::string(what) + " override '" + item +
                             "' is not key=value");
    }
    const std::string key = Trim(std::string_view(item).substr(0, eq));
    const std::string text = Trim(std::string_view(item).substr(eq + 1));
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw PlannerError(ErrorKind::kParse,
                         std::string(what) + " override '" + item +
                             "' has a non-numeric value");
    }
    apply(key, value);
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw PlannerError(ErrorKind::kIo, "cannot write " + path.string());
  }
}

struct RunOutputs {
  RunReport report;
  CorridorArtifacts artifacts;
  std::vector<ModePlan> plans;
};

RunOutputs RunCore(const Scenario& sc, RunMode mode,
                   const PlannerConfig& planner, double rate_hz) {
  RunOutputs out;
  const auto start = Clock::now();
  out.artifacts = BuildCorridorArtifacts(sc, planner);
  const double shared_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  std::vector<CorridorMode> modes;
  if (mode != RunMode::kCuboidal) modes.push_back(CorridorMode::kTrapezoidal);
  if (mode != RunMode::kTrapezoidal) modes.push_back(CorridorMode::kCuboidal);
  for (const CorridorMode m : modes) {
    const auto mode_start = Clock::now();
    ModePlan plan = PlanMode(sc, out.artifacts, m, planner);
    ModeReport r;
    r.mode = m;
    r.status = plan.result.status;
    r.objective = plan.result.objective;
    r.solve_time_ms = plan.result.solve_time_ms;
    r.pipeline_time_ms =
        shared_ms +
        std::chrono::duration<double, std::milli>(Clock::now() - mode_start).count();
    r.corridor_count = plan.corridors.size();
    r.violated_family = plan.result.violated_family;
    r.trajectory = plan.result.trajectory;
    if (r.trajectory) {
      r.samples = SampleTrajectory(*r.trajectory, rate_hz);
      for (const auto& row : r.samples) {
        r.max_abs_as = std::max(r.max_abs_as, std::abs(row[5]));
        r.max_abs_al = std::max(r.max_abs_al, std::abs(row[6]));
        r.max_vs = std::max(r.max_vs, row[3]);
      }
    }
    out.report.modes.push_back(std::move(r));
    out.plans.push_back(std::move(plan));
  }
  return out;
}

}  // namespace

RunMode ParseRunMode(std::string_view name) {
  if (name == "trap" || name == "trapezoidal") return RunMode::kTrapezoidal;
  if (name == "cub" || name == "cuboidal") return RunMode::kCuboidal;
  if (name == "both") return RunMode::kBoth;
  throw PlannerError(ErrorKind::kValidation,
                     "mode must be trap, cub or both, got '" +
                         std::string(name) + "'",
                     "mode");
}

void RunConfig::Validate() const {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw PlannerError(ErrorKind::kValidation, "sample rate must be positive",
                       "rate");
  }
  planner.weights.Validate();
  planner.limits.Validate();
}

void ApplyWeightOverrides(std::string_view spec, Weights* weights) {
  ForEachOverride(spec, "weight", [&](const std::string& key, double value) {
    int index = 0;
    if (key.size() >= 2 && key[0] == 'w') {
      const auto [ptr, ec] =
          std::from_chars(key.data() + 1, key.data() + key.size(), index);
      if (ec != std::errc() || ptr != key.data() + key.size()) index = 0;
    }
    if (index < 1 || index > 10) {
      throw PlannerError(ErrorKind::kParse, "unknown weight '" + key + "'");
    }
    (*weights)[index] = value;
  });
}

void ApplyLimitOverrides(std::string_view spec, PhysicalLimits* limits) {
  const std::map<std::string, double*> slots = {
      {"vs_min", &limits->velocity_s.lo},     {"vs_max", &limits->velocity_s.hi},
      {"as_min", &limits->acceleration_s.lo}, {"as_max", &limits->acceleration_s.hi},
      {"js_min", &limits->jerk_s.lo},         {"js_max", &limits->jerk_s.hi},
      {"vl_min", &limits->velocity_l.lo},     {"vl_max", &limits->velocity_l.hi},
      {"al_min", &limits->acceleration_l.lo}, {"al_max", &limits->acceleration_l.hi},
      {"jl_min", &limits->jerk_l.lo},         {"jl_max", &limits->jerk_l.hi},
      {"a_cm", &limits->a_cm},
  };
  ForEachOverride(spec, "limit", [&](const std::string& key, double value) {
    const auto it = slots.find(key);
    if (it == slots.end()) {
      throw PlannerError(ErrorKind::kParse, "unknown limit '" + key + "'");
    }
    *it->second = value;
  });
}

void ApplyMarginOverrides(std::string_view spec, MarginConfig* margins) {
  ForEachOverride(spec, "margin", [&](const std::string& key, double value) {
    if (key == "ego_length") {
      margins->ego_length = value;
    } else if (key == "lateral_margin") {
      margins->lateral_margin = value;
    } else {
      throw PlannerError(ErrorKind::kParse, "unknown margin '" + key + "'");
    }
  });
}

std::vector<TrajectorySample> SampleTrajectory(
    const PiecewiseBezierTrajectory& traj, double rate_hz) {
  std::vector<TrajectorySample> rows;
  const double horizon = traj.Horizon();
  const int count = static_cast<int>(std::floor(horizon * rate_hz + 1e-9));
  for (int i = 0; i <= count; ++i) {
    const double t = std::min(horizon, i / rate_hz);
    TrajectorySample row;
    row[0] = t;
    for (int r = 0; r < 4; ++r) {
      const auto v = traj.Eval(t, r);
      row[1 + 2 * r] = v[0];
      row[2 + 2 * r] = v[1];
    }
    rows.push_back(row);
  }
  if (rows.empty() || horizon - rows.back()[0] > 1e-9) {
    TrajectorySample row;
    row[0] = horizon;
    for (int r = 0; r < 4; ++r) {
      const auto v = traj.Eval(horizon, r);
      row[1 + 2 * r] = v[0];
      row[2 + 2 * r] = v[1];
    }
    rows.push_back(row);
  }
  return rows;
}

std::string TrajectoryCsv(const std::vector<TrajectorySample>& samples) {
  std::string out = "t,s,l,vs,vl,as,al,js,jl\n";
  for (const auto& row : samples) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += Num(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string SlicesCsv(const Scenario& sc, const std::vector<LSlice>& slices) {
  std::string out = "slice_id,l_beg,l_end,t,lb_s,ub_s,blocked\n";
  for (const auto& slice : slices) {
    for (size_t i = 0; i < slice.lb_s.size(); ++i) {
      out += std::to_string(slice.id) + ',' + Num(slice.l_beg) + ',' +
             Num(slice.l_end) + ',' + Num(sc.TimeAt(static_cast<int>(i))) + ',' +
             Num(slice.lb_s[i]) + ',' + Num(slice.ub_s[i]) + ',' +
             (slice.blocked[i] ? "1" : "0") + '\n';
    }
  }
  return out;
}

std::string CorridorsJson(const CorridorSequence& seq) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int k = 0; k < seq.size(); ++k) {
    const ConvexRegion& r = seq.regions[k];
    arr.push_back({{"k", k},
                   {"T_k", seq.StartTime(k)},
                   {"T_k1", seq.EndTime(k)},
                   {"lbias", r.lbias},
                   {"lskew", r.lskew},
                   {"ubias", r.ubias},
                   {"uskew", r.uskew},
                   {"l_beg", r.l_beg},
                   {"l_end", r.l_end},
                   {"feasible", r.feasible}});
  }
  return arr.dump(2) + "\n";
}

std::string QpDump(const QpProblem& p) {
  std::ostringstream out;
  out << "n " << p.num_vars() << " meq " << p.b_eq.size() << " mie "
      << p.b_ie.size() << '\n';
  auto triplets = [&](const char* tag, const SparseMatrix& m) {
    for (int k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        out << tag << ' ' << it.row() << ' ' << it.col() << ' '
            << ExactNum(it.value()) << '\n';
      }
    }
  };
  auto vector = [&](const char* tag, const Eigen::VectorXd& v) {
    out << tag;
    for (int i = 0; i < v.size(); ++i) out << ' ' << ExactNum(v[i]);
    out << '\n';
  };
  triplets("Q", p.Q);
  triplets("Aeq", p.A_eq);
  triplets("Aie", p.A_ie);
  vector("q", p.q);
  vector("beq", p.b_eq);
  vector("bie", p.b_ie);
  out << "const " << ExactNum(p.constant) << '\n';
  return out.str();
}

const ModeReport* RunReport::Find(CorridorMode mode) const {
  for (const auto& m : modes) {
    if (m.mode == mode) return &m;
  }
  return nullptr;
}

int RunReport::ExitCode() const {
  int code = 0;
  for (const auto& m : modes) {
    if (m.status == QpStatus::kInfeasible) code = std::max(code, 2);
    if (m.status == QpStatus::kSolverLimit && code == 0) code = 1;
  }
  return code;
}

RunReport RunScenario(const Scenario& sc, RunMode mode,
                      const PlannerConfig& planner, double rate_hz) {
  return RunCore(sc, mode, planner, rate_hz).report;
}

RunReport Run(const RunConfig& config) {
  config.Validate();
  Scenario sc;
  try {
    sc = LoadScenario(config.scenario_path);
  } catch (const PlannerError& e) {
    throw PlannerError(e.kind(), std::string("scenario stage: ") + e.what(),
                       e.field());
  }
  RunOutputs out = RunCore(sc, config.mode, config.planner, config.rate_hz);

  try {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    for (size_t i = 0; i < out.plans.size(); ++i) {
      const ModeReport& r = out.report.modes[i];
      const std::string name(CorridorModeName(r.mode));
      if (r.trajectory) {
        WriteFile(dir / ("trajectory_" + name + ".csv"), TrajectoryCsv(r.samples));
      }
      if (config.dump_corridors) {
        WriteFile(dir / ("corridors_" + name + ".json"),
                  CorridorsJson(out.plans[i].corridors));
      }
      if (config.dump_qp) {
        WriteFile(dir / ("qp_" + name + ".txt"), QpDump(out.plans[i].qp.problem));
      }
    }
    if (config.dump_slices) {
      WriteFile(dir / "slices.csv", SlicesCsv(sc, out.artifacts.slices));
    }
  } catch (const std::filesystem::filesystem_error& e) {
    throw PlannerError(ErrorKind::kIo, std::string("export stage: ") + e.what());
  } catch (const PlannerError& e) {
    throw PlannerError(e.kind(), std::string("export stage: ") + e.what());
  }
  return out.report;
}

std::string Compare(const RunReport& report) {
  const ModeReport* trap = report.Find(CorridorMode::kTrapezoidal);
  const ModeReport* cub = report.Find(CorridorMode::kCuboidal);
  if (!trap || !cub) {
    throw PlannerError(ErrorKind::kMissingMode,
                       "comparison needs both trapezoidal and cuboidal runs");
  }
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %-13s %14s %9s %9s %9s %10s\n",
                "mode", "status", "objective", "max|as|", "max|al|", "max vs",
                "solve ms");
  out << line;
  for (const ModeReport* m : {trap, cub}) {
    const bool ok = m->status == QpStatus::kOptimal;
    std::snprintf(line, sizeof(line),
                  "%-12s %-13s %14s %9s %9s %9s %10.3f\n",
                  std::string(CorridorModeName(m->mode)).c_str(),
                  std::string(QpStatusName(m->status)).c_str(),
                  ok ? Num(m->objective).c_str() : "-",
                  ok ? Num(std::round(m->max_abs_as * 1e4) / 1e4).c_str() : "-",
                  ok ? Num(std::round(m->max_abs_al * 1e4) / 1e4).c_str() : "-",
                  ok ? Num(std::round(m->max_vs * 1e4) / 1e4).c_str() : "-",
                  m->solve_time_ms);
    out << line;
  }
  const bool trap_ok = trap->status == QpStatus::kOptimal;
  const bool cub_ok = cub->status == QpStatus::kOptimal;
  if (trap_ok && cub_ok) {
    out << "delta (trapezoidal - cuboidal): objective "
        << Num(trap->objective - cub->objective) << ", max|as| "
        << Num(trap->max_abs_as - cub->max_abs_as) << ", max|al| "
        << Num(trap->max_abs_al - cub->max_abs_al) << '\n';
  } else if (trap_ok != cub_ok) {
    out << "note: only " << (trap_ok ? "trapezoidal" : "cuboidal")
        << " found a trajectory; the cuboid control-point set is contained "
           "in the trapezoidal one\n";
  }
  return out.str();
}

std::string Summary(const RunReport& report) {
  std::ostringstream out;
  for (const auto& m : report.modes) {
    out << CorridorModeName(m.mode) << ": " << QpStatusName(m.status);
    if (m.status == QpStatus::kOptimal) {
      out << " objective=" << Num(m.objective) << " corridors="
          << m.corridor_count << " max|as|=" << Num(m.max_abs_as)
          << " max|al|=" << Num(m.max_abs_al) << " max_vs=" << Num(m.max_vs)
          << " solve_ms=" << Num(std::round(m.solve_time_ms * 1e3) / 1e3);
    } else if (m.violated_family) {
      out << " (" << ConstraintFamilyName(*m.violated_family) << ")";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stcorridor
