// Copyright 2026 The momreg Authors.
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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "momreg/harness.hpp"

namespace momreg::io {

/// A scenario plus the tail-run settings that travel with it.
struct ScenarioFile {
  ScenarioSpec spec;
  QueryPolicy query = QueryPolicy::fixed;
  Point query_point;                 // empty: support center
  std::optional<double> threshold;  // empty: the closed-form radius
  double level = 0.95;
};

/// YAML layout mirrors the ScenarioSpec field names. Unknown keys are errors.
ScenarioFile parse_scenario(const std::string& yaml_text);
ScenarioFile load_scenario(const std::string& path);

/// Full config echo; excludes the worker count so outputs do not depend on it.
nlohmann::ordered_json scenario_to_json(const ScenarioFile& file);

/// One line of the results table.
struct ResultRow {
  std::string scenario_id;
  std::string estimator;
  std::size_t n = 0;
  std::size_t dim = 0;
  double delta = 0.0;
  double threshold = 0.0;
  TailEstimate estimate;
  double wall_time_ms = 0.0;
};

std::string results_csv_header();
std::string results_csv_line(const ResultRow& row);
nlohmann::ordered_json result_to_json(const ResultRow& row);

}  // namespace momreg::io
