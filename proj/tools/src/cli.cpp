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

#include "momreg_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "momreg/adaptive.hpp"
#include "momreg/errors.hpp"
#include "momreg/harness.hpp"
#include "momreg/mom.hpp"
#include "momreg/oracles.hpp"
#include "momreg/stats.hpp"
#include "momreg_cli/csv_io.hpp"
#include "momreg_cli/scenario_io.hpp"

namespace momreg::cli {
namespace {

using nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes `<prefix>.csv` and `<prefix>.json`, or the CSV to `out` when no
// prefix is set.
void emit(const std::string& prefix, const std::string& csv, const ordered_json& json,
          std::ostream& out) {
  if (prefix.empty()) {
    out << csv;
    return;
  }
  std::ofstream csv_file(prefix + ".csv");
  std::ofstream json_file(prefix + ".json");
  if (!csv_file || !json_file) throw std::runtime_error("cannot write outputs at '" + prefix + "'");
  csv_file << csv;
  json_file << json.dump(2) << '\n';
}

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled) {}
  double elapsed_ms() const {
    if (!enabled_) return 0.0;
    const auto dt = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(dt).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------
// Shared estimator flags.

struct EstimatorFlags {
  std::string family = "knn";
  std::optional<double> k;
  std::optional<double> h;
  std::optional<double> cells;
  bool without_replacement = false;

  void add(CLI::App* app) {
    app->add_option("--estimator", family, "Base estimator")
        ->check(CLI::IsMember({"knn", "bagged", "mnn", "kernel", "partition"}));
    app->add_option("--k", k, "Neighbor count (knn, bagged, mnn)");
    app->add_option("--h", h, "Kernel bandwidth");
    app->add_option("--K", cells, "Partition cells per axis");
    app->add_flag("--without-replacement", without_replacement,
                  "Bagged 1-NN with subsampling instead of resampling");
  }

  Family kind() const { return family_from_string(family); }

  // The explicit tuning value matching the family, if one was given.
  std::optional<double> parameter() const {
    const Family f = kind();
    const bool wants_k = f == Family::knn || f == Family::bagged || f == Family::mnn;
    if ((k && !wants_k) || (h && f != Family::kernel) || (cells && f != Family::partition)) {
      throw UsageError("tuning flag does not match --estimator " + family);
    }
    if (wants_k) return k;
    return f == Family::kernel ? h : cells;
  }

  BaseEstimatorKind make(double value) const {
    auto count = [&](const char* what) {
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw UsageError(std::string(what) + " must be a positive integer");
      }
      return static_cast<std::size_t>(value);
    };
    switch (kind()) {
      case Family::knn: return estimator::KNN{count("--k")};
      case Family::bagged: return estimator::BaggedOneNN{count("--k"), !without_replacement};
      case Family::mnn: return estimator::MutualNN{count("--k")};
      case Family::kernel: return estimator::Kernel{value};
      case Family::partition: return estimator::Partition{count("--K")};
    }
    throw UsageError("unknown estimator");
  }
};

struct ModelFlags {
  std::optional<double> sigma;
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<double> diameter;

  void add(CLI::App* app) {
    app->add_option("--sigma", sigma, "Noise standard deviation bound");
    app->add_option("--rho", rho, "Small-ball constant of the feature law");
    app->add_option("--alpha", alpha, "Doubling constant (mnn only)");
    app->add_option("--diameter", diameter, "Support diameter (default: data bounding box)");
  }

  bool complete() const { return sigma && rho; }

  ModelClass make(const Dataset& data) const {
    ModelClass m;
    m.dim = data.dim();
    m.sigma = *sigma;
    m.rho = *rho;
    m.alpha = alpha;
    if (diameter) {
      m.diameter = *diameter;
    } else {
      double s = 0.0;
      for (std::size_t a = 0; a < data.dim(); ++a) {
        double lo = data.point(0)[a];
        double hi = lo;
        for (std::size_t i = 1; i < data.size(); ++i) {
          lo = std::min(lo, data.point(i)[a]);
          hi = std::max(hi, data.point(i)[a]);
        }
        s += (hi - lo) * (hi - lo);
      }
      m.diameter = std::sqrt(s);
      if (m.diameter == 0.0) throw UsageError("all points coincide; pass --diameter");
    }
    m.validate();
    return m;
  }
};

std::vector<Point> load_queries(const std::string& inline_points, const std::string& file,
                                std::size_t dim) {
  if (!inline_points.empty() == !file.empty()) {
    throw UsageError("give exactly one of --query or --queries");
  }
  if (!inline_points.empty()) return io::parse_points(inline_points, dim);
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open query file '" + file + "'");
  auto points = io::read_points_csv(in, dim, file);
  if (points.empty()) throw UsageError("query file '" + file + "' has no rows");
  return points;
}

std::string point_header(std::size_t dim) {
  std::string s;
  for (std::size_t a = 0; a < dim; ++a) s += "x" + std::to_string(a + 1) + ",";
  return s;
}

std::string point_fields(const Point& p) {
  std::string s;
  for (double c : p) s += io::format_double(c) + ",";
  return s;
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  std::string data;
  std::string query;
  std::string queries;
  EstimatorFlags est;
  ModelFlags model;
  std::optional<std::size_t> blocks;
  std::optional<double> delta;
  bool automatic = false;
  bool robust = false;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  if (a.automatic && !a.model.sigma) throw UsageError("--auto requires --sigma");
  if (a.automatic && !a.model.rho) throw UsageError("--auto requires --rho");
  if (a.blocks && a.delta) throw UsageError("give at most one of --m and --delta");
  const Dataset data = io::read_dataset_file(a.data);
  const auto queries = load_queries(a.query, a.queries, data.dim());

  const Family family = a.est.kind();
  const std::size_t m = a.blocks ? *a.blocks : (a.delta ? select_m(*a.delta) : 1);
  if (m < 1 || m > data.size()) throw UsageError("--m must lie in [1, n]");
  std::optional<ModelClass> model;
  if (a.model.complete()) model = a.model.make(data);

  MoMConfig config;
  config.blocks = m;
  const auto parameter = a.est.parameter();
  if (parameter) {
    config.base = a.est.make(*parameter);
  } else if (a.automatic) {
    config.base = select_base(family, *model, data.size(), m);
  } else {
    throw UsageError("give a tuning flag (--k, --h, --K) or --auto");
  }
  validate(config.base, data.size() / m);

  std::optional<double> radius;
  if (model) radius = radius_for_blocks(family, *model, data.size(), m, a.robust);

  std::ostringstream csv;
  csv << point_header(data.dim()) << "prediction,radius,blocks\n";
  ordered_json rows = ordered_json::array();
  for (const Point& q : queries) {
    const double pred = mom_predict(data, q, config, a.seed);
    csv << point_fields(q) << io::format_double(pred) << ','
        << (radius ? io::format_double(*radius) : "") << ',' << m << '\n';
    rows.push_back({{"query", q}, {"prediction", pred}});
  }
  ordered_json j;
  j["estimator"] = describe(config.base);
  j["blocks"] = m;
  j["radius"] = radius ? ordered_json(*radius) : nullptr;
  j["robust"] = a.robust;
  j["seed"] = a.seed;
  j["predictions"] = rows;
  emit(a.out, csv.str(), j, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// tail

struct RunFlags {
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::optional<std::size_t> trials;
  std::string out;
  bool check = false;
  bool no_timing = false;

  void add(CLI::App* app, bool seed_required = true) {
    auto* s = app->add_option("--seed", seed, "Master seed");
    if (seed_required) s->required();
    app->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    app->add_option("--out", out, "Output prefix for <prefix>.csv and <prefix>.json");
    app->add_flag("--assert", check, "Exit 4 when the certification check fails");
    app->add_flag("--no-timing", no_timing, "Report wall_time_ms as 0");
  }
};

struct TailArgs {
  std::string scenario;
  RunFlags run;
  std::optional<double> threshold;
};

void warn_if_underpowered(std::size_t trials, double delta, double level, std::ostream& err) {
  if (underpowered(trials, delta, level)) {
    err << "warning: " << trials << " trials cannot certify level " << io::format_double(delta)
        << " (zero-exceedance upper bound "
        << io::format_double(clopper_pearson(0, trials, level).upper) << ")\n";
  }
}

int cmd_tail(const TailArgs& a, std::ostream& out, std::ostream& err) {
  io::ScenarioFile file = io::load_scenario(a.scenario);
  if (a.run.trials) file.spec.trials = *a.run.trials;
  if (a.run.seed) file.spec.seed = *a.run.seed;
  if (a.threshold) file.threshold = *a.threshold;
  const ScenarioSpec& spec = file.spec;

  TailOptions opt;
  opt.threshold = file.threshold ? *file.threshold : default_threshold(spec);
  opt.query = file.query;
  opt.query_point = file.query_point;
  opt.trials = spec.trials;
  opt.seed = spec.seed;
  opt.jobs = a.run.jobs;
  opt.level = file.level;

  warn_if_underpowered(opt.trials, resolve_estimator(spec).delta, opt.level, err);
  const Stopwatch clock(!a.run.no_timing);
  const TailReport report = estimate_tail(spec, opt);
  const double elapsed = clock.elapsed_ms();

  const std::string label =
      (spec.estimator.mode == EstimatorSpec::Mode::adaptive ? "adaptive-" : "mom-") +
      describe(report.resolved.config.base);
  std::vector<io::ResultRow> rows;
  rows.push_back({spec.id, label, spec.n, spec.dim, report.resolved.delta, opt.threshold,
                  report.estimate, elapsed});
  if (report.pooled_k > 0) {
    rows.push_back({spec.id, "pooled-knn(k=" + std::to_string(report.pooled_k) + ")", spec.n,
                    spec.dim, report.resolved.delta, opt.threshold,
                    make_tail_estimate(report.pooled_exceedances, opt.trials, opt.level),
                    elapsed});
  }

  std::ostringstream csv;
  csv << io::results_csv_header() << '\n';
  ordered_json results = ordered_json::array();
  for (const auto& r : rows) {
    csv << io::results_csv_line(r) << '\n';
    results.push_back(io::result_to_json(r));
  }
  ordered_json j;
  j["config"] = io::scenario_to_json(file);
  j["resolved"] = {{"blocks", report.resolved.blocks},
                   {"delta", report.resolved.delta},
                   {"estimator", describe(report.resolved.config.base)},
                   {"threshold", opt.threshold}};
  j["results"] = results;
  j["error_quantile_995"] = empirical_quantile(report.errors, 0.995);
  if (!report.pooled_errors.empty()) {
    j["pooled_error_quantile_995"] = empirical_quantile(report.pooled_errors, 0.995);
  }
  emit(a.run.out, csv.str(), j, out);

  if (a.run.check && !(report.estimate.upper <= report.resolved.delta)) {
    throw AssertionFailure("cp_upper " + io::format_double(report.estimate.upper) + " > delta " +
                           io::format_double(report.resolved.delta));
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// adaptive

struct AdaptiveArgs {
  std::string data;
  std::string query;
  std::string queries;
  std::string family = "knn";
  ModelFlags model;
  std::string scenario;
  std::vector<double> deltas;
  double tolerance = 1.0;
  RunFlags run;
};

int cmd_adaptive_predict(const AdaptiveArgs& a, std::ostream& out) {
  if (!a.model.complete()) throw UsageError("adaptive prediction requires --sigma and --rho");
  const Dataset data = io::read_dataset_file(a.data);
  const auto queries = load_queries(a.query, a.queries, data.dim());
  const ModelClass model = a.model.make(data);
  const Family family = family_from_string(a.family);
  const std::uint64_t seed = a.run.seed.value_or(0);

  std::ostringstream csv;
  csv << point_header(data.dim()) << "estimate,m_hat,m_max\n";
  ordered_json rows = ordered_json::array();
  for (const Point& q : queries) {
    const AdaptiveResult r = adaptive_predict(data, q, family, model, seed);
    csv << point_fields(q) << io::format_double(r.estimate) << ',' << r.m_hat << ',' << r.m_max
        << '\n';
    ordered_json intervals = ordered_json::array();
    for (const auto& iv : r.intervals) {
      intervals.push_back(
          {{"blocks", iv.blocks}, {"center", iv.center}, {"half_width", iv.half_width}});
    }
    rows.push_back({{"query", q},
                    {"estimate", r.estimate},
                    {"m_hat", r.m_hat},
                    {"m_max", r.m_max},
                    {"skipped", r.skipped},
                    {"intervals", intervals}});
  }
  ordered_json j;
  j["family"] = a.family;
  j["seed"] = seed;
  j["predictions"] = rows;
  emit(a.run.out, csv.str(), j, out);
  return kSuccess;
}

int cmd_adaptive_check(const AdaptiveArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.run.seed) throw UsageError("--seed is required with --scenario");
  io::ScenarioFile file = io::load_scenario(a.scenario);
  if (a.run.trials) file.spec.trials = *a.run.trials;
  file.spec.seed = *a.run.seed;
  file.spec.estimator.mode = EstimatorSpec::Mode::adaptive;
  const ScenarioSpec& spec = file.spec;

  std::vector<double> deltas = a.deltas;
  if (deltas.empty()) {
    const std::size_t top = std::min<std::size_t>(
        10, max_blocks(spec.estimator.family, spec.model, spec.n));
    for (std::size_t m = 1; m <= top; ++m) {
      const double level = adaptive_level(m);
      if (level < 1.0) deltas.push_back(level);
    }
  }
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) throw UsageError("--deltas entries must lie in (0, 1)");
    warn_if_underpowered(spec.trials, d, file.level, err);
  }

  TailOptions opt;
  opt.query = file.query;
  opt.query_point = file.query_point;
  opt.trials = spec.trials;
  opt.seed = spec.seed;
  opt.jobs = a.run.jobs;
  opt.level = file.level;
  const auto checks = adaptive_guarantee_check(spec, deltas, opt);

  std::ostringstream csv;
  csv << "delta,m_delta,width,violations,trials,cp_lower,cp_upper,event_trials,event_violations\n";
  ordered_json rows = ordered_json::array();
  bool ok = true;
  for (const auto& c : checks) {
    csv << io::format_double(c.delta) << ',' << c.m_delta << ',' << io::format_double(c.width)
        << ',' << c.violations.exceedances << ',' << c.violations.trials << ','
        << io::format_double(c.violations.lower) << ',' << io::format_double(c.violations.upper)
        << ',' << c.event_trials << ',' << c.event_violations << '\n';
    rows.push_back({{"delta", c.delta},
                    {"m_delta", c.m_delta},
                    {"width", c.width},
                    {"violations", c.violations.exceedances},
                    {"trials", c.violations.trials},
                    {"cp_lower", c.violations.lower},
                    {"cp_upper", c.violations.upper},
                    {"event_trials", c.event_trials},
                    {"event_violations", c.event_violations}});
    ok = ok && c.violations.upper <= a.tolerance * c.delta;
  }
  ordered_json j;
  j["config"] = io::scenario_to_json(file);
  j["tolerance"] = a.tolerance;
  j["checks"] = rows;
  emit(a.run.out, csv.str(), j, out);
  if (a.run.check && !ok) throw AssertionFailure("adaptive guarantee not certified");
  return kSuccess;
}

// ---------------------------------------------------------------------------
// oracles

int cmd_oracles(const std::string& prefix, std::ostream& out) {
  const auto results = run_all_oracles();
  std::ostringstream csv;
  csv << "oracle,checks,failures,min_slack,max_slack,status\n";
  ordered_json rows = ordered_json::array();
  bool ok = true;
  for (const auto& r : results) {
    csv << r.name << ',' << r.checks << ',' << r.failures << ',' << io::format_double(r.min_slack)
        << ',' << io::format_double(r.max_slack) << ',' << (r.passed() ? "PASS" : "FAIL") << '\n';
    rows.push_back({{"oracle", r.name},
                    {"checks", r.checks},
                    {"failures", r.failures},
                    {"min_slack", r.min_slack},
                    {"max_slack", r.max_slack},
                    {"passed", r.passed()}});
    ok = ok && r.passed();
  }
  emit(prefix, csv.str(), ordered_json{{"oracles", rows}}, out);
  return ok ? kSuccess : kAssertionFailure;
}

// ---------------------------------------------------------------------------
// lower-bound

struct LowerBoundArgs {
  std::size_t dim = 1;
  double sigma = 1.0;
  std::size_t n = 64;
  std::optional<double> delta;
  EstimatorFlags est;
  std::size_t trials = 10000;
  std::size_t pilot_trials = 2000;
  double level = 0.95;
  RunFlags run;
};

int cmd_lower_bound(const LowerBoundArgs& a, std::ostream& out, std::ostream& err) {
  const double cap = std::pow(2.0, -static_cast<double>(a.dim + 3));
  if (!(*a.delta > 0.0 && *a.delta <= cap)) {
    throw UsageError("--delta must lie in (0, 2^-(d+3)] = (0, " + io::format_double(cap) + "]");
  }
  LowerBoundConfig cfg;
  cfg.dim = a.dim;
  cfg.sigma = a.sigma;
  cfg.n = a.n;
  cfg.delta = *a.delta;
  cfg.family = a.est.kind();
  cfg.parameter = a.est.parameter();
  cfg.trials = a.run.trials.value_or(a.trials);
  cfg.pilot_trials = a.pilot_trials;
  cfg.seed = *a.run.seed;
  cfg.jobs = a.run.jobs;
  cfg.level = a.level;
  if (cfg.delta == cap) {
    err << "warning: delta = 2^-(d+3) is the degenerate boundary (bump width and threshold 0)\n";
  }
  warn_if_underpowered(cfg.trials, cfg.delta, cfg.level, err);
  const LowerBoundReport r = run_lower_bound(cfg);
  if (r.tuning_fallback) {
    err << "warning: closed-form tuning infeasible at n=" << cfg.n << "; using " << r.estimator
        << '\n';
  }

  std::ostringstream csv;
  csv << "d,sigma,n,delta,h,cells,threshold,blocks,estimator,tuning_fallback,exceedances,trials,"
         "point,cp_lower,cp_upper\n";
  csv << cfg.dim << ',' << io::format_double(cfg.sigma) << ',' << cfg.n << ','
      << io::format_double(cfg.delta) << ',' << io::format_double(r.h) << ',' << r.cells << ','
      << io::format_double(r.threshold) << ',' << r.blocks << ',' << r.estimator << ','
      << (r.tuning_fallback ? 1 : 0) << ',' << r.estimate.exceedances << ','
      << r.estimate.trials << ',' << io::format_double(r.estimate.point) << ','
      << io::format_double(r.estimate.lower) << ',' << io::format_double(r.estimate.upper)
      << '\n';
  ordered_json j;
  j["config"] = {{"d", cfg.dim},        {"sigma", cfg.sigma},
                 {"n", cfg.n},          {"delta", cfg.delta},
                 {"estimator", a.est.family},
                 {"parameter", cfg.parameter ? ordered_json(*cfg.parameter) : nullptr},
                 {"trials", cfg.trials}, {"pilot_trials", cfg.pilot_trials},
                 {"seed", cfg.seed},    {"level", cfg.level}};
  j["h"] = r.h;
  j["cells_per_axis"] = r.cells_per_axis;
  j["cells"] = r.cells;
  j["threshold"] = r.threshold;
  j["blocks"] = r.blocks;
  j["estimator"] = r.estimator;
  j["tuning_fallback"] = r.tuning_fallback;
  j["signs"] = r.signs;
  j["exceedances"] = r.estimate.exceedances;
  j["trials"] = r.estimate.trials;
  j["point"] = r.estimate.point;
  j["cp_lower"] = r.estimate.lower;
  j["cp_upper"] = r.estimate.upper;
  j["meets_delta"] = r.estimate.point >= cfg.delta;
  emit(a.run.out, csv.str(), j, out);
  if (a.run.check && !(r.estimate.point >= cfg.delta)) {
    throw AssertionFailure("empirical exceedance " + io::format_double(r.estimate.point) +
                           " < delta " + io::format_double(cfg.delta));
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// contaminate-demo

io::ScenarioFile builtin_contamination_scenario() {
  io::ScenarioFile f;
  ScenarioSpec& s = f.spec;
  s.id = "contamination-demo";
  s.dim = 1;
  s.n = 4096;
  s.target = Target::linear;
  s.noise.sigma = 0.5;
  s.model = default_model(1, 1.0, 0.5);
  s.estimator.family = Family::knn;
  s.estimator.blocks = 4;
  s.estimator.delta = std::exp(-4.0);
  s.estimator.robust = true;
  s.estimator.compare_pooled = true;
  ContaminationSpec c;
  c.outliers = 1;
  c.blocks = 4;
  c.magnitude = 1e6;
  c.location = Point{0.5};
  s.contamination = c;
  s.trials = 10000;
  f.query_point = Point{0.5};
  return f;
}

struct ContaminateArgs {
  std::string scenario;
  RunFlags run;
};

int cmd_contaminate_demo(const ContaminateArgs& a, std::ostream& out, std::ostream& err) {
  io::ScenarioFile file =
      a.scenario.empty() ? builtin_contamination_scenario() : io::load_scenario(a.scenario);
  ScenarioSpec& spec = file.spec;
  if (!spec.contamination) throw UsageError("scenario has no contamination section");
  if (a.run.trials) spec.trials = *a.run.trials;
  spec.seed = *a.run.seed;
  spec.estimator.robust = true;
  spec.estimator.compare_pooled = true;

  const ResolvedEstimator resolved = resolve_estimator(spec);
  if (!contamination_budget_ok(resolved.blocks, spec.contamination->outliers)) {
    err << "warning: " << spec.contamination->outliers << " outliers exceed the budget m/4 for m="
        << resolved.blocks << '\n';
  }
  warn_if_underpowered(spec.trials, resolved.delta, file.level, err);

  TailOptions opt;
  opt.threshold = default_threshold(spec);
  opt.query = file.query;
  opt.query_point = file.query_point;
  opt.trials = spec.trials;
  opt.seed = spec.seed;
  opt.jobs = a.run.jobs;
  opt.level = file.level;
  const double plain_radius =
      radius_for_blocks(spec.estimator.family, spec.model, spec.n, resolved.blocks, false);

  const Stopwatch clock(!a.run.no_timing);
  const TailReport report = estimate_tail(spec, opt);
  const double elapsed = clock.elapsed_ms();

  std::uint64_t pooled_plain = 0;
  for (double e : report.pooled_errors) pooled_plain += e >= plain_radius;

  const std::string pooled = "pooled-knn(k=" + std::to_string(report.pooled_k) + ")";
  std::vector<io::ResultRow> rows = {
      {spec.id, "mom-robust-" + describe(resolved.config.base), spec.n, spec.dim, resolved.delta,
       opt.threshold, report.estimate, elapsed},
      {spec.id, pooled + "-robust", spec.n, spec.dim, resolved.delta, opt.threshold,
       make_tail_estimate(report.pooled_exceedances, opt.trials, opt.level), elapsed},
      {spec.id, pooled + "-plain", spec.n, spec.dim, resolved.delta, plain_radius,
       make_tail_estimate(pooled_plain, opt.trials, opt.level), elapsed},
  };
  std::ostringstream csv;
  csv << io::results_csv_header() << '\n';
  ordered_json results = ordered_json::array();
  for (const auto& r : rows) {
    csv << io::results_csv_line(r) << '\n';
    results.push_back(io::result_to_json(r));
  }
  ordered_json j;
  j["config"] = io::scenario_to_json(file);
  j["robust_radius"] = opt.threshold;
  j["plain_radius"] = plain_radius;
  j["results"] = results;
  emit(a.run.out, csv.str(), j, out);

  const bool mom_ok = report.estimate.upper <= resolved.delta;
  const bool pooled_broken = 2 * pooled_plain >= opt.trials;
  if (a.run.check && !(mom_ok && pooled_broken)) {
    throw AssertionFailure("contamination check failed (mom certified: " +
                           std::string(mom_ok ? "yes" : "no") +
                           ", pooled broken: " + (pooled_broken ? "yes" : "no") + ")");
  }
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Median-of-means nonparametric regression and tail certification"};
  app.name("momreg");
  app.require_subcommand(1);
  // "-h" is free for the bandwidth flag.
  app.set_help_flag("--help", "Print this help message and exit");

  PredictArgs predict;
  auto* p = app.add_subcommand("predict", "Predict at query points from a dataset CSV");
  p->add_option("--data", predict.data, "Dataset CSV (x1,...,xd,y)")->required();
  p->add_option("--query", predict.query, "Inline queries: '0.5,0.2;0.1,0.9'");
  p->add_option("--queries", predict.queries, "Query CSV (x1,...,xd)");
  predict.est.add(p);
  predict.model.add(p);
  p->add_option("--m", predict.blocks, "Number of blocks");
  p->add_option("--delta", predict.delta, "Confidence level; sets m = ceil(ln(1/delta))");
  p->add_flag("--auto", predict.automatic, "Closed-form tuning from --sigma/--rho");
  p->add_flag("--robust", predict.robust, "Report the contamination-inflated radius");
  p->add_option("--seed", predict.seed, "Tie-breaking seed (default 0)");
  p->add_option("--out", predict.out, "Output prefix");

  TailArgs tail;
  auto* t = app.add_subcommand("tail", "Monte Carlo tail certification for a scenario file");
  t->add_option("--scenario", tail.scenario, "Scenario YAML")->required();
  t->add_option("--threshold", tail.threshold, "Override the closed-form radius");
  tail.run.add(t);

  AdaptiveArgs adaptive;
  auto* ad = app.add_subcommand("adaptive", "Level-free estimate, or its guarantee check");
  ad->add_option("--data", adaptive.data, "Dataset CSV for predictions");
  ad->add_option("--query", adaptive.query, "Inline queries");
  ad->add_option("--queries", adaptive.queries, "Query CSV");
  ad->add_option("--estimator", adaptive.family, "Base estimator")
      ->check(CLI::IsMember({"knn", "bagged", "mnn", "kernel", "partition"}));
  adaptive.model.add(ad);
  ad->add_option("--scenario", adaptive.scenario, "Scenario YAML for the guarantee check");
  ad->add_option("--deltas", adaptive.deltas, "Levels to check")->delimiter(',');
  ad->add_option("--tolerance", adaptive.tolerance, "Assert cp_upper <= tolerance * delta");
  adaptive.run.add(ad, false);

  std::string oracle_out;
  auto* o = app.add_subcommand("oracles", "Deterministic inequality checks");
  o->add_option("--out", oracle_out, "Output prefix");

  LowerBoundArgs lower;
  auto* lb = app.add_subcommand("lower-bound", "Adversarial bump instance experiment");
  lb->add_option("--dim", lower.dim, "Dimension")->check(CLI::PositiveNumber);
  lb->add_option("--sigma", lower.sigma, "Noise standard deviation");
  lb->add_option("--n", lower.n, "Sample size")->check(CLI::PositiveNumber);
  lb->add_option("--delta", lower.delta, "Level in (0, 2^-(d+3)]")->required();
  lb->add_option("--pilot-trials", lower.pilot_trials, "Trials per sign pattern in the search");
  lb->add_option("--level", lower.level, "Confidence level of the reported interval");
  lower.est.add(lb);
  lower.run.add(lb);

  ContaminateArgs contaminate;
  auto* cd = app.add_subcommand("contaminate-demo", "Outlier robustness comparison");
  cd->add_option("--scenario", contaminate.scenario, "Scenario YAML (default: built-in demo)");
  contaminate.run.add(cd);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*p) return cmd_predict(predict, out);
    if (*t) return cmd_tail(tail, out, err);
    if (*ad) {
      if (!adaptive.scenario.empty() == !adaptive.data.empty()) {
        throw UsageError("give exactly one of --data or --scenario");
      }
      return adaptive.scenario.empty() ? cmd_adaptive_predict(adaptive, out)
                                       : cmd_adaptive_check(adaptive, out, err);
    }
    if (*o) return cmd_oracles(oracle_out, out);
    if (*lb) return cmd_lower_bound(lower, out, err);
    if (*cd) return cmd_contaminate_demo(contaminate, out, err);
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigurationError;
  } catch (const AssertionFailure& e) {
    err << "assertion failed: " << e.what() << '\n';
    return kAssertionFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace momreg::cli
