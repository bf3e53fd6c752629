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

// Command-line front end for the corridor planner.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stcorridor/report.h"

int main(int argc, char** argv) {
  CLI::App app{"Plan a trajectory through spatio-temporal corridors"};
  std::string scenario;
  std::string mode = "both";
  std::string out_dir = ".";
  double rate = 100.0;
  bool dump_slices = false;
  bool dump_corridors = false;
  bool dump_qp = false;
  std::string weights;
  std::string limits;
  std::string margins;
  app.add_option("--scenario", scenario, "Scenario JSON file")->required();
  app.add_option("--mode", mode, "trap, cub or both");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--rate", rate, "Export sample rate in Hz");
  app.add_flag("--dump-slices", dump_slices, "Write slices.csv");
  app.add_flag("--dump-corridors", dump_corridors, "Write corridors_<mode>.json");
  app.add_flag("--dump-qp", dump_qp, "Write qp_<mode>.txt");
  app.add_option("--weights", weights, "Weight overrides, e.g. w1=2,w4=0.5");
  app.add_option("--limits", limits, "Limit overrides, e.g. as_max=2.5");
  app.add_option("--margins", margins,
                 "Margin overrides: ego_length, lateral_margin");
  CLI11_PARSE(app, argc, argv);

  try {
    stcorridor::RunConfig config;
    config.scenario_path = scenario;
    config.output_dir = out_dir;
    config.rate_hz = rate;
    config.dump_slices = dump_slices;
    config.dump_corridors = dump_corridors;
    config.dump_qp = dump_qp;
    try {
      config.mode = stcorridor::ParseRunMode(mode);
      stcorridor::ApplyWeightOverrides(weights, &config.planner.weights);
      stcorridor::ApplyLimitOverrides(limits, &config.planner.limits);
      stcorridor::ApplyMarginOverrides(margins, &config.planner.margins);
    } catch (const stcorridor::PlannerError& e) {
      throw stcorridor::PlannerError(e.kind(), std::string("config stage: ") +
                                                   e.what());
    }
    const stcorridor::RunReport report = stcorridor::Run(config);
    std::cout << stcorridor::Summary(report);
    if (config.mode == stcorridor::RunMode::kBoth) {
      std::cout << stcorridor::Compare(report);
    }
    const int code = report.ExitCode();
    std::cout << "exit " << code << '\n';
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cout << "exit 1\n";
    return 1;
  }
}
