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

#include "momreg_cli/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "momreg_cli/csv_io.hpp"

namespace momreg::io {
namespace {

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw std::invalid_argument("scenario: '" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw std::invalid_argument("scenario: unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
T get(const YAML::Node& node, const char* key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw std::invalid_argument(std::string("scenario: bad value for '") + key + "'");
  }
}

template <class T>
std::optional<T> get_optional(const YAML::Node& node, const char* key) {
  if (!node[key] || node[key].IsNull()) return std::nullopt;
  return get<T>(node, key, T{});
}

std::string to_string(EstimatorSpec::Mode m) {
  return m == EstimatorSpec::Mode::mom ? "mom" : "adaptive";
}

std::string to_string(ContaminationSpec::Placement p) {
  return p == ContaminationSpec::Placement::block_concentrated ? "block_concentrated"
                                                               : "uniform_random";
}

}  // namespace

ScenarioFile parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
  check_keys(root, "scenario",
             {"id", "dim", "n", "support_side", "target", "noise", "model", "estimator",
              "contamination", "trials", "seed", "tail"});
  ScenarioFile file;
  ScenarioSpec& s = file.spec;
  s.id = get<std::string>(root, "id", s.id);
  s.dim = get<std::size_t>(root, "dim", s.dim);
  s.n = get<std::size_t>(root, "n", s.n);
  s.support_side = get<double>(root, "support_side", s.support_side);
  s.target = target_from_string(get<std::string>(root, "target", to_string(s.target)));
  s.trials = get<std::size_t>(root, "trials", s.trials);
  s.seed = get<std::uint64_t>(root, "seed", s.seed);

  if (const YAML::Node noise = root["noise"]) {
    check_keys(noise, "noise", {"kind", "sigma", "nu", "tail_index"});
    s.noise.kind = noise_kind_from_string(get<std::string>(noise, "kind", "gaussian"));
    s.noise.sigma = get<double>(noise, "sigma", s.noise.sigma);
    s.noise.nu = get<double>(noise, "nu", s.noise.nu);
    s.noise.tail_index = get<double>(noise, "tail_index", s.noise.tail_index);
  }

  s.model = default_model(s.dim, s.support_side, s.noise.sigma);
  if (const YAML::Node model = root["model"]) {
    check_keys(model, "model", {"rho", "sigma", "diameter", "alpha"});
    s.model.rho = get<double>(model, "rho", s.model.rho);
    s.model.sigma = get<double>(model, "sigma", s.model.sigma);
    s.model.diameter = get<double>(model, "diameter", s.model.diameter);
    s.model.alpha = get_optional<double>(model, "alpha");
  }

  const YAML::Node est = root["estimator"];
  if (!est) throw std::invalid_argument("scenario: missing 'estimator' section");
  check_keys(est, "estimator",
             {"family", "mode", "delta", "blocks", "parameter", "robust", "compare_pooled"});
  EstimatorSpec& e = s.estimator;
  e.family = family_from_string(get<std::string>(est, "family", "knn"));
  const auto mode = get<std::string>(est, "mode", "mom");
  if (mode == "mom") {
    e.mode = EstimatorSpec::Mode::mom;
  } else if (mode == "adaptive") {
    e.mode = EstimatorSpec::Mode::adaptive;
  } else {
    throw std::invalid_argument("scenario: unknown estimator mode '" + mode + "'");
  }
  e.delta = get_optional<double>(est, "delta");
  e.blocks = get_optional<std::size_t>(est, "blocks");
  e.parameter = get_optional<double>(est, "parameter");
  e.robust = get<bool>(est, "robust", false);
  e.compare_pooled = get<bool>(est, "compare_pooled", false);

  if (const YAML::Node c = root["contamination"]) {
    check_keys(c, "contamination", {"outliers", "placement", "blocks", "magnitude", "location"});
    ContaminationSpec cs;
    cs.outliers = get<std::size_t>(c, "outliers", 0);
    const auto placement = get<std::string>(c, "placement", "block_concentrated");
    if (placement == "block_concentrated") {
      cs.placement = ContaminationSpec::Placement::block_concentrated;
    } else if (placement == "uniform_random") {
      cs.placement = ContaminationSpec::Placement::uniform_random;
    } else {
      throw std::invalid_argument("scenario: unknown placement '" + placement + "'");
    }
    cs.blocks = get<std::size_t>(c, "blocks", resolve_estimator(s).blocks);
    cs.magnitude = get<double>(c, "magnitude", 1e6 * s.noise.sigma);
    if (c["location"]) cs.location = get<std::vector<double>>(c, "location", {});
    s.contamination = cs;
  }

  if (const YAML::Node tail = root["tail"]) {
    check_keys(tail, "tail", {"threshold", "query", "query_point", "level"});
    const auto q = get<std::string>(tail, "query", "fixed");
    if (q == "fixed") {
      file.query = QueryPolicy::fixed;
    } else if (q == "random") {
      file.query = QueryPolicy::random;
    } else {
      throw std::invalid_argument("scenario: unknown query policy '" + q + "'");
    }
    if (tail["query_point"]) file.query_point = get<std::vector<double>>(tail, "query_point", {});
    file.threshold = get_optional<double>(tail, "threshold");
    file.level = get<double>(tail, "level", file.level);
  }
  s.validate();
  if (!file.query_point.empty() && file.query_point.size() != s.dim) {
    throw std::invalid_argument("scenario: query_point has the wrong dimension");
  }
  return file;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

nlohmann::ordered_json scenario_to_json(const ScenarioFile& file) {
  const ScenarioSpec& s = file.spec;
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["dim"] = s.dim;
  j["n"] = s.n;
  j["support_side"] = s.support_side;
  j["target"] = to_string(s.target);
  j["noise"] = {{"kind", to_string(s.noise.kind)},
                {"sigma", s.noise.sigma},
                {"nu", s.noise.nu},
                {"tail_index", s.noise.tail_index}};
  j["model"] = {{"rho", s.model.rho}, {"sigma", s.model.sigma}, {"diameter", s.model.diameter}};
  j["model"]["alpha"] = s.model.alpha ? nlohmann::ordered_json(*s.model.alpha) : nullptr;
  const EstimatorSpec& e = s.estimator;
  nlohmann::ordered_json est;
  est["family"] = to_string(e.family);
  est["mode"] = to_string(e.mode);
  est["delta"] = e.delta ? nlohmann::ordered_json(*e.delta) : nullptr;
  est["blocks"] = e.blocks ? nlohmann::ordered_json(*e.blocks) : nullptr;
  est["parameter"] = e.parameter ? nlohmann::ordered_json(*e.parameter) : nullptr;
  est["robust"] = e.robust;
  est["compare_pooled"] = e.compare_pooled;
  j["estimator"] = est;
  if (s.contamination) {
    const ContaminationSpec& c = *s.contamination;
    nlohmann::ordered_json cj;
    cj["outliers"] = c.outliers;
    cj["placement"] = to_string(c.placement);
    cj["blocks"] = c.blocks;
    cj["magnitude"] = c.magnitude;
    cj["location"] = c.location ? nlohmann::ordered_json(*c.location) : nullptr;
    j["contamination"] = cj;
  } else {
    j["contamination"] = nullptr;
  }
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  nlohmann::ordered_json tail;
  tail["query"] = file.query == QueryPolicy::fixed ? "fixed" : "random";
  tail["query_point"] = file.query_point;
  tail["threshold"] = file.threshold ? nlohmann::ordered_json(*file.threshold) : nullptr;
  tail["level"] = file.level;
  j["tail"] = tail;
  return j;
}

std::string results_csv_header() {
  return "scenario_id,estimator,n,d,delta,threshold,exceedances,trials,cp_lower,cp_upper,"
         "wall_time_ms";
}

std::string results_csv_line(const ResultRow& r) {
  std::ostringstream out;
  out << r.scenario_id << ',' << r.estimator << ',' << r.n << ',' << r.dim << ','
      << format_double(r.delta) << ',' << format_double(r.threshold) << ','
      << r.estimate.exceedances << ',' << r.estimate.trials << ','
      << format_double(r.estimate.lower) << ',' << format_double(r.estimate.upper) << ','
      << format_double(r.wall_time_ms);
  return out.str();
}

nlohmann::ordered_json result_to_json(const ResultRow& r) {
  nlohmann::ordered_json j;
  j["scenario_id"] = r.scenario_id;
  j["estimator"] = r.estimator;
  j["n"] = r.n;
  j["d"] = r.dim;
  j["delta"] = r.delta;
  j["threshold"] = r.threshold;
  j["exceedances"] = r.estimate.exceedances;
  j["trials"] = r.estimate.trials;
  j["point"] = r.estimate.point;
  j["cp_lower"] = r.estimate.lower;
  j["cp_upper"] = r.estimate.upper;
  j["level"] = r.estimate.level;
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

}  // namespace momreg::io
