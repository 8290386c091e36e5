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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <boost/math/distributions/binomial.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "momreg/harness.hpp"
#include "momreg/oracles.hpp"
#include "momreg/random.hpp"
#include "momreg/stats.hpp"
#include "momreg_cli/cli.hpp"
#include "reference.hpp"

namespace {

using namespace momreg;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string oracle_detail(const OracleResult& r) {
  return std::to_string(r.checks) + " checks, " + std::to_string(r.failures) +
         " failures, min slack " + fmt("%.3g", r.min_slack);
}

// Independent upper tail: P(Bin(m,p) >= t) via Boost's binomial law.
double boost_upper_tail(std::size_t m, double p, double t) {
  const double start = std::ceil(t);
  if (start <= 0.0) return 1.0;
  if (start > static_cast<double>(m)) return 0.0;
  const boost::math::binomial_distribution<double> law(static_cast<double>(m), p);
  return boost::math::cdf(boost::math::complement(law, start - 1.0));
}

ScenarioSpec headline() {
  ScenarioSpec s;
  s.id = "headline";
  s.dim = 1;
  s.n = 4096;
  s.support_side = 1.0;
  s.target = Target::linear;
  s.noise.sigma = 0.5;
  s.model = default_model(1, 1.0, 0.5);
  s.estimator.family = Family::knn;
  s.estimator.delta = std::exp(-3.0);
  return s;
}

TailOptions center_options(std::size_t trials, std::uint64_t seed, double threshold) {
  TailOptions o;
  o.threshold = threshold;
  o.query_point = Point{0.5};
  o.trials = trials;
  o.seed = seed;
  o.jobs = 1;
  return o;
}

std::string tail_detail(const TailEstimate& t) {
  return std::to_string(t.exceedances) + "/" + std::to_string(t.trials) + " exceedances, cp_upper " +
         fmt("%.4g", t.upper);
}

Outcome criterion_1() {
  const OracleResult r = binomial_majority_oracle();
  std::size_t bad = 0;
  for (std::size_t m = 1; m <= 20; ++m) {
    for (int j = 1; j <= 50; ++j) {
      const double p = 0.005 * j;
      const double md = static_cast<double>(m);
      bad += !(boost_upper_tail(m, p, md / 2.0) <= std::pow(2.0, md) * std::pow(p, md / 2.0));
    }
  }
  return {r.passed() && bad == 0,
          oracle_detail(r) + "; independent binomial cross-check failures " + std::to_string(bad)};
}

Outcome criterion_2() {
  const OracleResult r = binomial_quarter_oracle();
  const double cap = 27.0 / std::pow(4.0 * std::numbers::e, 4.0);
  std::size_t bad = 0;
  std::size_t checks = 0;
  for (std::size_t m = 1; m <= 20; ++m) {
    std::vector<double> grid;
    for (int j = 1; j <= 50; ++j) {
      if (0.005 * j <= cap) grid.push_back(0.005 * j);
      grid.push_back(cap * j / 50.0);
    }
    const double md = static_cast<double>(m);
    for (double p : grid) {
      ++checks;
      const double bound = std::pow(4.0 / std::pow(3.0, 0.75), md) * std::pow(p, md / 4.0);
      bad += !(boost_upper_tail(m, p, md / 4.0) <= bound);
    }
  }
  return {r.passed() && bad == 0, oracle_detail(r) + "; independent cross-check " +
                                       std::to_string(checks - bad) + "/" +
                                       std::to_string(checks)};
}

Outcome criterion_3() {
  const OracleResult r = bagged_bias_oracle();
  return {r.passed(), oracle_detail(r)};
}

Outcome criterion_4() {
  const std::vector<std::size_t> ranks = {1, 5, 20, 50};
  std::size_t checks = 0;
  std::size_t bad = 0;
  double worst = -1e300;
  for (std::size_t d = 1; d <= 3; ++d) {
    const Point corner(d, 0.0);
    const Point center(d, 0.5);
    for (const Point* x : {&corner, &center}) {
      const auto res = expected_nn_distances(d, 200, ranks, *x, 50000, 400 + d + (x == &center));
      for (const auto& c : res) {
        ++checks;
        const double expected_bound = 2.0 * std::pow(static_cast<double>(c.rank) /
                                                         (rho_unit_cube(d) * 201.0),
                                                     1.0 / static_cast<double>(d));
        const bool ok = std::fabs(c.bound - expected_bound) <= 1e-12 * expected_bound &&
                        c.mean <= c.bound + 3.0 * c.std_error;
        bad += !ok;
        worst = std::max(worst, c.mean / c.bound);
      }
    }
  }
  return {bad == 0, std::to_string(checks) + " (d, i, x) cells, max mean/bound " + fmt("%.3f", worst)};
}

Outcome criterion_5() {
  const ScenarioSpec s = headline();
  if (std::fabs(rho_unit_cube(1) - 1.0) > 1e-15 || std::fabs(s.model.rho - 1.0) > 1e-15) {
    return {false, "rho mismatch"};
  }
  const double radius = default_threshold(s);
  const TailReport r = estimate_tail(s, center_options(20000, 5, radius));
  const double delta = std::exp(-3.0);
  return {r.estimate.upper <= delta,
          describe(r.resolved.config.base) + ", radius " + fmt("%.4f", radius) + ", " +
              tail_detail(r.estimate) + " vs delta " + fmt("%.4f", delta)};
}

Outcome criterion_6() {
  ScenarioSpec s = headline();
  s.noise.kind = NoiseSpec::Kind::student_t;
  s.noise.nu = 2.5;
  s.estimator.compare_pooled = true;
  const double radius = default_threshold(s);
  const TailReport r = estimate_tail(s, center_options(20000, 6, radius));
  const double q_mom = empirical_quantile(r.errors, 0.995);
  const double q_pooled = empirical_quantile(r.pooled_errors, 0.995);
  const bool ok = r.estimate.upper <= std::exp(-3.0) && q_pooled > q_mom;
  return {ok, tail_detail(r.estimate) + "; q99.5 mom " + fmt("%.4f", q_mom) + " < pooled(k=" +
                  std::to_string(r.pooled_k) + ") " + fmt("%.4f", q_pooled)};
}

Outcome criterion_7() {
  ScenarioSpec s = headline();
  s.estimator.delta = std::exp(-4.0);
  s.estimator.robust = true;
  s.estimator.compare_pooled = true;
  ContaminationSpec c;
  c.outliers = 1;
  c.blocks = 4;
  c.magnitude = 1e6;
  c.location = Point{0.5};
  s.contamination = c;
  const ResolvedEstimator res = resolve_estimator(s);
  if (res.blocks != 4 || !contamination_budget_ok(res.blocks, c.outliers)) {
    return {false, "block budget violated"};
  }
  const double robust = default_threshold(s);
  const double plain = radius_for_blocks(Family::knn, s.model, s.n, res.blocks, false);
  const TailReport r = estimate_tail(s, center_options(100000, 7, robust));
  std::uint64_t broken = 0;
  for (double e : r.pooled_errors) broken += e >= plain;
  const double frac = static_cast<double>(broken) / static_cast<double>(r.pooled_errors.size());
  return {r.estimate.upper <= std::exp(-4.0) && frac >= 0.5,
          "mom " + tail_detail(r.estimate) + " at robust radius " + fmt("%.1f", robust) +
              "; pooled exceeds plain radius " + fmt("%.3f", plain) + " in " +
              fmt("%.1f", 100.0 * frac) + "% of trials"};
}

Outcome criterion_8() {
  const OracleResult r = bump_quadrature_oracle(1e-6);
  std::string detail = oracle_detail(r) + ";";
  for (std::size_t d = 1; d <= 3; ++d) {
    const double exact = 1.0 / (2.0 * (d + 1.0) * (d + 2.0));
    const std::size_t grid = d == 1 ? 1000 : d == 2 ? 200 : 100;
    detail += " d" + std::to_string(d) + " rel " +
              fmt("%.2g", std::fabs(bump_square_integral(d, grid) - exact) / exact);
  }
  return {r.passed(), detail};
}

Outcome criterion_9() {
  LowerBoundConfig cfg;
  cfg.dim = 1;
  cfg.sigma = 1.0;
  cfg.n = 64;
  cfg.delta = std::pow(2.0, -6.0);
  cfg.family = Family::knn;
  cfg.trials = 10000;
  cfg.pilot_trials = 2000;
  cfg.seed = 9;
  const LowerBoundReport r = run_lower_bound(cfg);
  const bool ok = r.estimate.point >= cfg.delta && r.estimate.lower >= cfg.delta / 2.0;
  return {ok, r.estimator + (r.tuning_fallback ? " (fallback tuning)" : "") + ", h " +
                  fmt("%.4f", r.h) + ", " + std::to_string(r.cells) + " cells, threshold " +
                  fmt("%.4f", r.threshold) + ", p " + fmt("%.4f", r.estimate.point) +
                  ", cp_lower " + fmt("%.4f", r.estimate.lower) + " vs delta " +
                  fmt("%.4f", cfg.delta)};
}

Outcome criterion_10() {
  momreg::testing::Gen g(10);
  std::size_t mismatches = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t N = g.integer(1, 8);
    const std::size_t d = g.integer(1, 3);
    std::vector<double> f(N * d);
    std::vector<double> y(N);
    // Even blocks sit on a dyadic lattice: distances are exact, so ties are
    // genuine and both sides must resolve them by the tie uniforms.
    const bool lattice = rep % 2 == 0;
    auto coord = [&] { return lattice ? g.lattice(4) : g.uniform(); };
    for (auto& c : f) c = coord();
    for (auto& v : y) v = g.uniform(-1.0, 1.0);
    const Dataset data(d, f, y);
    Point x(d);
    for (auto& c : x) c = coord();
    const std::size_t k = g.integer(1, N);
    const std::uint64_t seed = derive_seed(10, rep);
    const double fast = mnn_predict(data.view(), x, k, seed);
    const double slow = momreg::testing::brute_force_mnn(data.view(), x, k, seed);
    mismatches += fast != slow;
  }
  return {mismatches == 0, "1000 blocks (500 on a tie-heavy dyadic lattice), " + std::to_string(mismatches) +
                               " mismatches"};
}

Outcome criterion_11() {
  ScenarioSpec s = headline();
  s.estimator.mode = EstimatorSpec::Mode::adaptive;
  const double c = validity_constant(Family::knn, s.model);
  const std::size_t top = static_cast<std::size_t>(std::floor(c * static_cast<double>(s.n)));
  const double lo = std::max(2.5e-4, adaptive_level(top));
  const double hi = 0.9;
  std::vector<double> deltas;
  for (int i = 0; i < 8; ++i) deltas.push_back(lo * std::pow(hi / lo, i / 7.0));
  const auto checks = adaptive_guarantee_check(s, deltas, center_options(10000, 11, 0.0));
  bool ok = true;
  std::string detail = "m_max " + std::to_string(top) + ";";
  for (const auto& ch : checks) {
    ok &= ch.violations.upper <= 1.5 * ch.delta;
    detail += " d=" + fmt("%.3g", ch.delta) + ":" + std::to_string(ch.violations.exceedances) +
              "(ub " + fmt("%.2g", ch.violations.upper) + ")";
  }
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_12() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "momreg_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path scen = dir / "headline.yaml";
  std::ofstream(scen) << "id: headline\ndim: 1\nn: 4096\ntarget: linear\n"
                         "noise:\n  sigma: 0.5\n"
                         "estimator:\n  family: knn\n  delta: 0.049787068367863944\n"
                         "  compare_pooled: true\n"
                         "trials: 2000\nseed: 1\ntail:\n  query: random\n";
  std::ostringstream sink;
  auto run = [&](const std::string& jobs) {
    return cli::run_cli({"tail", "--scenario", scen.string(), "--seed", "12", "--jobs", jobs,
                         "--no-timing", "--out", (dir / ("j" + jobs)).string()},
                        sink, sink);
  };
  const int a = run("1");
  const int b = run("8");
  const std::string csv1 = slurp(dir / "j1.csv");
  const bool same = a == 0 && b == 0 && !csv1.empty() && csv1 == slurp(dir / "j8.csv") &&
                    slurp(dir / "j1.json") == slurp(dir / "j8.json");
  fs::remove_all(dir);
  return {same, same ? "CSV and JSON byte-identical at --jobs 1 and 8"
                     : "outputs differ (exit codes " + std::to_string(a) + ", " +
                           std::to_string(b) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact binomial majority oracle", criterion_1},
      {"robust binomial quarter oracle", criterion_2},
      {"bagged weight bias bound", criterion_3},
      {"nearest-neighbor distance control", criterion_4},
      {"headline Gaussian concentration", criterion_5},
      {"heavy-tail robustness", criterion_6},
      {"contamination robustness", criterion_7},
      {"bump quadrature", criterion_8},
      {"lower-bound instance", criterion_9},
      {"mutual NN brute-force equivalence", criterion_10},
      {"adaptive estimator guarantee", criterion_11},
      {"determinism across worker counts", criterion_12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
