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

#include <gtest/gtest.h>

#include <sstream>

#include "momreg_cli/csv_io.hpp"
#include "momreg_cli/scenario_io.hpp"
#include "reference.hpp"

namespace momreg {
namespace {

using testing::Gen;

TEST(Csv, RoundTripIsBitExact) {
  Gen g(81);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = g.integer(1, 4);
    const Dataset data = g.dataset(g.integer(1, 40), d, -1e6, 1e6);
    std::stringstream ss;
    io::write_dataset_csv(ss, data);
    const Dataset back = io::read_dataset_csv(ss);
    ASSERT_EQ(back.dim(), d);
    ASSERT_EQ(back.size(), data.size());
    EXPECT_TRUE(std::equal(data.features().begin(), data.features().end(),
                           back.features().begin()));
    EXPECT_TRUE(std::equal(data.responses().begin(), data.responses().end(),
                           back.responses().begin()));
  }
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(Csv, HeaderIsOptional) {
  std::istringstream plain("0.5,1\n0.25,2\n");
  const Dataset a = io::read_dataset_csv(plain);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.dim(), 1u);
  std::istringstream headed("x,y\n\n0.5,1\n");
  EXPECT_EQ(io::read_dataset_csv(headed).size(), 1u);
}

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    io::read_dataset_csv(in, "t.csv");
  } catch (const io::CsvError& e) {
    EXPECT_NE(std::string(e.what()).find("t.csv:"), std::string::npos);
    return e.line();
  }
  ADD_FAILURE() << "no error for: " << text;
  return 0;
}

TEST(Csv, ErrorsCiteLines) {
  EXPECT_EQ(error_line("x,y\n0.1,2\n0.2,abc\n"), 3u);
  EXPECT_EQ(error_line("0.1,2\n0.2,3,4\n"), 2u);
  EXPECT_EQ(error_line("0.1,2\n0.2,nan\n"), 2u);
  EXPECT_EQ(error_line("0.1,inf\n"), 1u);
  EXPECT_EQ(error_line("7\n"), 1u);
  EXPECT_EQ(error_line("x,y\n"), 0u);
  EXPECT_THROW(io::read_dataset_file("/nonexistent/data.csv"), std::invalid_argument);
}

TEST(Csv, Points) {
  const auto pts = io::parse_points("0.1,0.2;0.3,0.4", 2);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1], (Point{0.3, 0.4}));
  EXPECT_THROW(io::parse_points("0.1;0.2,0.3", 2), std::invalid_argument);
  std::istringstream in("x1\n0.5\n0.75\n");
  EXPECT_EQ(io::read_points_csv(in, 1).size(), 2u);
}

constexpr const char* kScenario = R"(
id: demo
dim: 2
n: 500
target: sine
noise:
  kind: student_t
  sigma: 0.25
  nu: 4
estimator:
  family: partition
  blocks: 3
  robust: true
contamination:
  outliers: 2
  placement: uniform_random
  magnitude: 1000
trials: 10
seed: 9
tail:
  threshold: 0.5
  query: random
)";

TEST(Scenario, ParsesAllSections) {
  const io::ScenarioFile f = io::parse_scenario(kScenario);
  EXPECT_EQ(f.spec.id, "demo");
  EXPECT_EQ(f.spec.dim, 2u);
  EXPECT_EQ(f.spec.n, 500u);
  EXPECT_EQ(f.spec.target, Target::sine);
  EXPECT_EQ(f.spec.noise.kind, NoiseSpec::Kind::student_t);
  EXPECT_EQ(f.spec.noise.nu, 4.0);
  EXPECT_EQ(f.spec.estimator.family, Family::partition);
  EXPECT_EQ(f.spec.estimator.blocks, 3u);
  EXPECT_TRUE(f.spec.estimator.robust);
  ASSERT_TRUE(f.spec.contamination);
  EXPECT_EQ(f.spec.contamination->outliers, 2u);
  EXPECT_EQ(f.spec.contamination->placement, ContaminationSpec::Placement::uniform_random);
  EXPECT_EQ(f.spec.trials, 10u);
  EXPECT_EQ(f.spec.seed, 9u);
  EXPECT_EQ(f.threshold, 0.5);
  EXPECT_EQ(f.query, QueryPolicy::random);
  const ModelClass expected = default_model(2, 1.0, 0.25);
  EXPECT_EQ(f.spec.model.rho, expected.rho);
  EXPECT_EQ(f.spec.model.sigma, 0.25);
}

TEST(Scenario, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(io::parse_scenario("dim: 1\nn: 10\nbogus: 1\n"), std::invalid_argument);
  EXPECT_THROW(io::parse_scenario("dim: 1\nn: 10\nnoise:\n  colour: red\n"),
               std::invalid_argument);
  EXPECT_THROW(io::parse_scenario("dim: 1\nn: 10\nestimator:\n  family: svm\n"),
               std::invalid_argument);
  EXPECT_THROW(io::parse_scenario("dim: one\nn: 10\n"), std::invalid_argument);
  EXPECT_THROW(io::parse_scenario("dim: [1\n"), std::invalid_argument);
  EXPECT_THROW(io::load_scenario("/nonexistent/s.yaml"), std::invalid_argument);
}

TEST(Scenario, JsonEcho) {
  const io::ScenarioFile f = io::parse_scenario(kScenario);
  const auto j = io::scenario_to_json(f);
  EXPECT_EQ(j["id"], "demo");
  EXPECT_EQ(j["estimator"]["family"], "partition");
  EXPECT_EQ(io::parse_scenario(kScenario).spec.n, j["n"].get<std::size_t>());
}

TEST(Results, CsvRow) {
  io::ResultRow row;
  row.scenario_id = "s";
  row.estimator = "mom(knn)";
  row.n = 10;
  row.dim = 1;
  row.delta = 0.5;
  row.threshold = 0.25;
  row.estimate = make_tail_estimate(0, 10);
  EXPECT_EQ(io::results_csv_header(),
            "scenario_id,estimator,n,d,delta,threshold,exceedances,trials,cp_lower,cp_upper,"
            "wall_time_ms");
  const std::string line = io::results_csv_line(row);
  EXPECT_EQ(line.rfind("s,mom(knn),10,1,0.5,0.25,0,10,0,", 0), 0u) << line;
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  EXPECT_EQ(io::result_to_json(row)["exceedances"], 0);
}

}  // namespace
}  // namespace momreg
