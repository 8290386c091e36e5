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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "momreg/harness.hpp"
#include "momreg_cli/cli.hpp"
#include "momreg_cli/csv_io.hpp"
#include "reference.hpp"

namespace momreg {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("momreg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

constexpr const char* kSmallScenario = R"(id: small
dim: 1
n: 300
target: linear
noise:
  kind: gaussian
  sigma: 0.2
estimator:
  family: knn
  blocks: 3
  parameter: 4
  compare_pooled: true
trials: 40
seed: 1
tail:
  threshold: 0.3
  query: random
)";

TEST_F(CliTest, PredictNearestOfTwo) {
  const std::string data = write("two.csv", "x,y\n0.1,7\n0.9,-3\n");
  const CliRun r = run({"predict", "--data", data, "--query", "0.2;0.8", "--estimator", "knn",
                     "--k", "1", "--m", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].rfind("0.20000000000000001,7,", 0), 0u) << rows[1];
  EXPECT_EQ(rows[2].rfind("0.80000000000000004,-3,", 0), 0u) << rows[2];
}

TEST_F(CliTest, PredictAutoUsesSelectedBlocks) {
  testing::Gen g(91);
  std::ostringstream csv;
  io::write_dataset_csv(csv, g.dataset(2000, 1));
  const std::string data = write("d.csv", csv.str());
  const CliRun r = run({"predict", "--data", data, "--query", "0.5", "--auto", "--delta", "0.05",
                     "--sigma", "0.1", "--rho", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].substr(rows[1].rfind(',') + 1), "3");

  const CliRun missing = run({"predict", "--data", data, "--query", "0.5", "--auto", "--delta", "0.05"});
  EXPECT_EQ(missing.code, cli::kUsageError);
  const CliRun infeasible = run({"predict", "--data", data, "--query", "0.5", "--auto", "--delta",
                              "0.05", "--sigma", "1000", "--rho", "1"});
  EXPECT_EQ(infeasible.code, cli::kConfigurationError) << infeasible.err;
}

TEST_F(CliTest, PredictBadCsvCitesLine) {
  const std::string data = write("bad.csv", "0.1,1\n0.2,oops\n");
  const CliRun r = run({"predict", "--data", data, "--query", "0.5", "--k", "1"});
  EXPECT_EQ(r.code, cli::kUsageError);
  EXPECT_NE(r.err.find("bad.csv:2"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsageError);
  EXPECT_EQ(run({"predict"}).code, cli::kUsageError);
  EXPECT_EQ(run({"lower-bound", "--delta", "0.5", "--seed", "1"}).code, cli::kUsageError);
  const std::string scen = write("s.yaml", kSmallScenario);
  EXPECT_EQ(run({"tail", "--scenario", scen}).code, cli::kUsageError);  // seed required
  EXPECT_EQ(run({"--help"}).code, cli::kSuccess);
}

TEST_F(CliTest, OraclesPass) {
  const CliRun r = run({"oracles", "--out", path("o")});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(path("o.csv"));
  EXPECT_EQ(csv.find("FAIL"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("o.json")));
}

TEST_F(CliTest, TailOutputIndependentOfJobs) {
  const std::string scen = write("s.yaml", kSmallScenario);
  const CliRun one = run({"tail", "--scenario", scen, "--seed", "5", "--jobs", "1", "--no-timing",
                       "--out", path("one")});
  ASSERT_EQ(one.code, 0) << one.err;
  const CliRun three = run({"tail", "--scenario", scen, "--seed", "5", "--jobs", "3", "--no-timing",
                         "--out", path("three")});
  ASSERT_EQ(three.code, 0) << three.err;
  EXPECT_EQ(slurp(path("one.csv")), slurp(path("three.csv")));
  EXPECT_EQ(slurp(path("one.json")), slurp(path("three.json")));
  EXPECT_EQ(lines(slurp(path("one.csv"))).size(), 3u);
}

TEST_F(CliTest, TailUnderpoweredWarnsAndAssertFails) {
  const std::string scen = write("s.yaml", kSmallScenario);
  const CliRun r = run({"tail", "--scenario", scen, "--seed", "5", "--trials", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning:"), std::string::npos);
  const CliRun a = run({"tail", "--scenario", scen, "--seed", "5", "--trials", "10", "--assert"});
  EXPECT_EQ(a.code, cli::kAssertionFailure);
}

TEST_F(CliTest, TailNoiselessHasNoExceedances) {
  std::string text = kSmallScenario;
  text.replace(text.find("sigma: 0.2"), 10, "sigma: 0.0");
  // A noiseless model admits no pooled k-NN tuning.
  text.erase(text.find("  compare_pooled: true\n"), 23);
  const std::string scen = write("s.yaml", text);
  const CliRun r = run({"tail", "--scenario", scen, "--seed", "2", "--threshold", "0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_GE(rows.size(), 2u);
  EXPECT_NE(rows[1].find(",0,40,"), std::string::npos) << rows[1];
}

TEST_F(CliTest, LowerBoundBoundaryWarns) {
  const CliRun r = run({"lower-bound", "--dim", "1", "--n", "4", "--delta", "0.0625", "--seed", "3",
                     "--trials", "200", "--pilot-trials", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("boundary"), std::string::npos);
}

}  // namespace
}  // namespace momreg
