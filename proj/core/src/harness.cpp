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

#include "momreg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "momreg/errors.hpp"
#include "momreg/parallel.hpp"
#include "momreg/random.hpp"
#include "momreg/stats.hpp"

namespace momreg {
namespace {

constexpr double kPi = std::numbers::pi;

// Seed streams inside one trial.
constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kOutlierStream = 1;
constexpr std::uint64_t kQueryStream = 2;
constexpr std::uint64_t kEstimatorStream = 3;
constexpr std::uint64_t kPooledStream = 4;

BaseEstimatorKind explicit_base(Family family, double parameter) {
  auto as_count = [&](const char* what) {
    if (!(parameter >= 1.0) || parameter != std::floor(parameter)) {
      throw std::invalid_argument(std::string(what) + " must be a positive integer");
    }
    return static_cast<std::size_t>(parameter);
  };
  switch (family) {
    case Family::knn: return estimator::KNN{as_count("k")};
    case Family::bagged: return estimator::BaggedOneNN{as_count("k"), true};
    case Family::mnn: return estimator::MutualNN{as_count("k")};
    case Family::kernel: return estimator::Kernel{parameter};
    case Family::partition: return estimator::Partition{as_count("K")};
  }
  throw std::invalid_argument("unknown family");
}

Point support_center(std::size_t dim, double side) { return Point(dim, side / 2.0); }

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(Target t) {
  switch (t) {
    case Target::zero: return "zero";
    case Target::linear: return "linear";
    case Target::sine: return "sine";
    case Target::cone: return "cone";
  }
  return "unknown";
}

Target target_from_string(const std::string& name) {
  if (name == "zero") return Target::zero;
  if (name == "linear") return Target::linear;
  if (name == "sine") return Target::sine;
  if (name == "cone") return Target::cone;
  throw std::invalid_argument("unknown target function '" + name + "'");
}

double evaluate_target(Target t, std::span<const double> x) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  switch (t) {
    case Target::zero: return 0.0;
    case Target::linear: return std::accumulate(x.begin(), x.end(), 0.0) * scale;
    case Target::sine: return std::sin(std::accumulate(x.begin(), x.end(), 0.0) * scale);
    case Target::cone: {
      double s = 0.0;
      for (double c : x) s += (c - 0.5) * (c - 0.5);
      return std::sqrt(s);
    }
  }
  return 0.0;
}

std::string to_string(NoiseSpec::Kind k) {
  switch (k) {
    case NoiseSpec::Kind::gaussian: return "gaussian";
    case NoiseSpec::Kind::student_t: return "student_t";
    case NoiseSpec::Kind::pareto: return "pareto";
  }
  return "unknown";
}

NoiseSpec::Kind noise_kind_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseSpec::Kind::gaussian;
  if (name == "student_t") return NoiseSpec::Kind::student_t;
  if (name == "pareto") return NoiseSpec::Kind::pareto;
  throw std::invalid_argument("unknown noise family '" + name + "'");
}

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("noise: sigma must be >= 0");
  if (kind == Kind::student_t && !(nu > 2.0)) {
    throw std::invalid_argument("noise: Student-t needs nu > 2 for finite variance");
  }
  if (kind == Kind::pareto && !(tail_index > 2.0)) {
    throw std::invalid_argument("noise: Pareto needs tail index > 2 for finite variance");
  }
}

double sample_noise(const NoiseSpec& noise, std::mt19937_64& rng) {
  if (noise.sigma == 0.0) return 0.0;
  switch (noise.kind) {
    case NoiseSpec::Kind::gaussian:
      return std::normal_distribution<double>(0.0, noise.sigma)(rng);
    case NoiseSpec::Kind::student_t: {
      const double t = std::student_t_distribution<double>(noise.nu)(rng);
      return t * noise.sigma * std::sqrt((noise.nu - 2.0) / noise.nu);
    }
    case NoiseSpec::Kind::pareto: {
      // |Z| ~ Pareto(1, a), random sign: E[Z^2] = a / (a - 2).
      const double u = 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const double magnitude = std::pow(u, -1.0 / noise.tail_index);
      const double sign = (rng() >> 63) != 0 ? 1.0 : -1.0;
      const double a = noise.tail_index;
      return sign * magnitude * noise.sigma * std::sqrt((a - 2.0) / a);
    }
  }
  return 0.0;
}

void ScenarioSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("scenario: d must be positive");
  if (n < 1) throw std::invalid_argument("scenario: n must be positive");
  if (!(support_side > 0.0)) throw std::invalid_argument("scenario: support side must be positive");
  if (trials < 1) throw std::invalid_argument("scenario: trials must be positive");
  noise.validate();
  model.validate();
  if (model.dim != dim) throw std::invalid_argument("scenario: model dimension differs from d");
  if (contamination && contamination->outliers > n) {
    throw std::invalid_argument("scenario: more outliers than samples");
  }
}

ModelClass default_model(std::size_t dim, double support_side, double sigma) {
  ModelClass m;
  m.dim = dim;
  m.sigma = sigma;
  m.rho = rho_unit_cube(dim) / std::pow(support_side, static_cast<double>(dim));
  m.diameter = support_side * std::sqrt(static_cast<double>(dim));
  return m;
}

ResolvedEstimator resolve_estimator(const ScenarioSpec& spec) {
  const EstimatorSpec& e = spec.estimator;
  if (!e.delta && !e.blocks) {
    throw std::invalid_argument("estimator: need delta or blocks");
  }
  ResolvedEstimator out;
  out.delta = e.delta ? *e.delta : std::exp(-static_cast<double>(*e.blocks));
  if (e.mode == EstimatorSpec::Mode::adaptive) {
    const double c = validity_constant(e.family, spec.model);
    out.blocks = m_delta(out.delta, c, spec.n);
    out.config = {out.blocks, select_base(e.family, spec.model, spec.n, out.blocks)};
    return out;
  }
  out.blocks = e.blocks ? *e.blocks : select_m(out.delta);
  if (out.blocks < 1 || out.blocks > spec.n) {
    throw std::invalid_argument("estimator: block count outside [1, n]");
  }
  out.config.blocks = out.blocks;
  out.config.base = e.parameter ? explicit_base(e.family, *e.parameter)
                                : select_base(e.family, spec.model, spec.n, out.blocks);
  validate(out.config.base, spec.n / out.blocks);
  return out;
}

// ---------------------------------------------------------------------------

double rho_unit_cube(std::size_t d) {
  if (d < 1) throw std::invalid_argument("rho_unit_cube: d must be positive");
  const double dd = static_cast<double>(d);
  return std::pow(kPi, dd / 2.0) /
         (std::pow(2.0, dd) * std::pow(dd, dd / 2.0) * std::tgamma(1.0 + dd / 2.0));
}

Point sample_uniform_point(std::size_t dim, double side, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, side);
  Point p(dim);
  for (auto& c : p) c = unif(rng);
  return p;
}

Dataset generate_dataset(std::size_t n, std::size_t dim, double side,
                         const RegressionFunction& truth, const NoiseSpec& noise,
                         std::uint64_t seed) {
  noise.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, side);
  std::vector<double> features(n * dim);
  std::vector<double> responses(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> x(features.data() + i * dim, dim);
    for (auto& c : x) c = unif(rng);
    responses[i] = truth(x) + sample_noise(noise, rng);
  }
  return Dataset(dim, std::move(features), std::move(responses));
}

Dataset generate_dataset(const ScenarioSpec& spec, std::uint64_t seed) {
  const Target t = spec.target;
  return generate_dataset(
      spec.n, spec.dim, spec.support_side,
      [t](std::span<const double> x) { return evaluate_target(t, x); }, spec.noise, seed);
}

Dataset generate_dataset(const ScenarioSpec& spec) { return generate_dataset(spec, spec.seed); }

ContaminationResult contaminate(const Dataset& data, const ContaminationSpec& spec,
                                std::uint64_t seed, double support_side) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  if (spec.outliers > n) {
    throw std::invalid_argument("contaminate: " + std::to_string(spec.outliers) +
                                " outliers exceed " + std::to_string(n) + " samples");
  }
  if (spec.location && spec.location->size() != d) {
    throw std::invalid_argument("contaminate: outlier location has the wrong dimension");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(spec.outliers);
  if (spec.placement == ContaminationSpec::Placement::block_concentrated) {
    if (spec.blocks < 1 || spec.blocks > n) {
      throw std::invalid_argument("contaminate: block count outside [1, n]");
    }
    const std::size_t block_size = n / spec.blocks;
    for (std::size_t t = 0; t < spec.outliers; ++t) {
      const std::size_t offset = t / spec.blocks;
      if (offset >= block_size) {
        throw std::invalid_argument("contaminate: more outliers than block slots");
      }
      chosen.push_back((t % spec.blocks) * block_size + offset);
    }
  } else {
    // Partial Fisher-Yates.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t t = 0; t < spec.outliers; ++t) {
      std::uniform_int_distribution<std::size_t> pick(t, n - 1);
      std::swap(idx[t], idx[pick(rng)]);
      chosen.push_back(idx[t]);
    }
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<double> features(data.features().begin(), data.features().end());
  std::vector<double> responses(data.responses().begin(), data.responses().end());
  for (std::size_t i : chosen) {
    const Point x = spec.location ? *spec.location : sample_uniform_point(d, support_side, rng);
    std::copy(x.begin(), x.end(), features.begin() + static_cast<std::ptrdiff_t>(i * d));
    responses[i] = spec.magnitude;
  }
  return {Dataset(d, std::move(features), std::move(responses)), std::move(chosen)};
}

// ---------------------------------------------------------------------------

double lower_bound_g(std::span<const double> x) {
  double g = 0.5;
  for (double c : x) {
    const double gap = 0.5 - std::fabs(c);
    if (gap <= 0.0) return 0.0;
    g = std::min(g, gap);
  }
  return g;
}

AdversarialRegression::AdversarialRegression(std::vector<int> signs, double h, std::size_t dim)
    : signs_(std::move(signs)), h_(h), dim_(dim), per_axis_(cells_per_axis(h)) {
  if (dim < 1) throw std::invalid_argument("adversarial_regression: d must be positive");
  double total = 1.0;
  for (std::size_t a = 0; a < dim; ++a) total *= static_cast<double>(per_axis_);
  if (static_cast<double>(signs_.size()) != total) {
    throw std::invalid_argument("adversarial_regression: expected " +
                                std::to_string(static_cast<std::size_t>(total)) + " signs, got " +
                                std::to_string(signs_.size()));
  }
  for (int s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("adversarial_regression: signs must be +-1");
  }
}

std::size_t AdversarialRegression::cells_per_axis(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("adversarial_regression: h must be positive");
  }
  return static_cast<std::size_t>(std::ceil(1.0 / h));
}

std::optional<std::size_t> AdversarialRegression::cell_of(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("adversarial_regression: dimension mismatch");
  const double side = support_side();
  std::size_t cell = 0;
  for (double c : x) {
    if (!(c >= 0.0 && c <= side)) return std::nullopt;
    const auto idx = std::min(static_cast<std::size_t>(std::floor(c / h_)), per_axis_ - 1);
    cell = cell * per_axis_ + idx;
  }
  return cell;
}

Point AdversarialRegression::cell_center(std::size_t cell) const {
  Point a(dim_);
  for (std::size_t k = dim_; k-- > 0;) {
    a[k] = (static_cast<double>(cell % per_axis_) + 0.5) * h_;
    cell /= per_axis_;
  }
  return a;
}

double AdversarialRegression::operator()(std::span<const double> x) const {
  const auto cell = cell_of(x);
  if (!cell) return 0.0;
  const Point a = cell_center(*cell);
  Point u(dim_);
  for (std::size_t k = 0; k < dim_; ++k) u[k] = (x[k] - a[k]) / h_;
  return static_cast<double>(signs_[*cell]) * h_ * lower_bound_g(u);
}

AdversarialRegression adversarial_regression(std::vector<int> signs, double h, std::size_t dim) {
  return AdversarialRegression(std::move(signs), h, dim);
}

namespace {

double lower_bound_log_term(std::size_t dim, double delta) {
  const double cap = std::pow(2.0, -static_cast<double>(dim + 3));
  if (!(delta > 0.0 && delta <= cap)) {
    throw std::invalid_argument("lower bound: delta must lie in (0, 2^-(d+3)]");
  }
  return std::max(0.0, std::log(1.0 / (std::pow(2.0, static_cast<double>(dim + 3)) * delta)));
}

}  // namespace

double lower_bound_h(double sigma, std::size_t dim, std::size_t n, double delta) {
  if (n < 1) throw std::invalid_argument("lower_bound_h: n must be positive");
  const double dd = static_cast<double>(dim);
  const double l = lower_bound_log_term(dim, delta);
  return std::pow(kPi * sigma * sigma * (dd + 1.0) * (dd + 2.0) * l / static_cast<double>(n),
                  1.0 / (dd + 2.0));
}

double lower_bound_threshold(double sigma, std::size_t dim, std::size_t n, double delta) {
  if (n < 1) throw std::invalid_argument("lower_bound_threshold: n must be positive");
  const double l = lower_bound_log_term(dim, delta);
  return 0.25 * std::pow(sigma * sigma * l / static_cast<double>(n),
                         1.0 / (static_cast<double>(dim) + 2.0));
}

// ---------------------------------------------------------------------------

TailEstimate make_tail_estimate(std::uint64_t exceedances, std::uint64_t trials, double level) {
  TailEstimate t;
  t.exceedances = exceedances;
  t.trials = trials;
  t.level = level;
  t.point = static_cast<double>(exceedances) / static_cast<double>(trials);
  const ProportionInterval ci = clopper_pearson(exceedances, trials, level);
  t.lower = ci.lower;
  t.upper = ci.upper;
  return t;
}

bool underpowered(std::uint64_t trials, double delta, double level) {
  return clopper_pearson(0, trials, level).upper > delta;
}

double default_threshold(const ScenarioSpec& spec) {
  const ResolvedEstimator r = resolve_estimator(spec);
  const EstimatorSpec& e = spec.estimator;
  if (e.mode == EstimatorSpec::Mode::adaptive) {
    return 2.0 * radius_for_blocks(e.family, spec.model, spec.n, r.blocks);
  }
  const DeltaInterval range = admissible_delta(e.family, spec.model, spec.n);
  if (!range.contains(r.delta)) {
    throw ConfigurationError("delta in [e^{-cn+1}, 1)", range.lower, r.delta);
  }
  return radius_for_blocks(e.family, spec.model, spec.n, r.blocks, e.robust);
}

namespace {

struct TrialSetup {
  Dataset data;
  Point query;
  double truth;
};

TrialSetup setup_trial(const ScenarioSpec& spec, const TailOptions& options, std::uint64_t sub) {
  Dataset data = generate_dataset(spec, derive_seed(sub, kDataStream));
  if (spec.contamination && spec.contamination->outliers > 0) {
    data = contaminate(data, *spec.contamination, derive_seed(sub, kOutlierStream),
                       spec.support_side)
               .data;
  }
  Point q;
  if (options.query == QueryPolicy::random) {
    std::mt19937_64 rng(derive_seed(sub, kQueryStream));
    q = sample_uniform_point(spec.dim, spec.support_side, rng);
  } else {
    q = options.query_point.empty() ? support_center(spec.dim, spec.support_side)
                                    : options.query_point;
  }
  const double truth = evaluate_target(spec.target, q);
  return {std::move(data), std::move(q), truth};
}

}  // namespace

TailReport estimate_tail(const ScenarioSpec& spec, const TailOptions& options) {
  spec.validate();
  if (options.trials < 1) throw std::invalid_argument("estimate_tail: trials must be >= 1");
  if (!options.query_point.empty() && options.query_point.size() != spec.dim) {
    throw std::invalid_argument("estimate_tail: query point has the wrong dimension");
  }
  TailReport report;
  report.threshold = options.threshold;
  report.resolved = resolve_estimator(spec);
  const bool adaptive = spec.estimator.mode == EstimatorSpec::Mode::adaptive;
  if (spec.estimator.compare_pooled) report.pooled_k = select_k_star_knn(spec.model, spec.n, 1);

  struct Outcome {
    double error = 0.0;
    double pooled_error = 0.0;
  };
  const auto outcomes = run_trials(options.trials, options.jobs, [&](std::size_t t) {
    const std::uint64_t sub = derive_seed(options.seed, t);
    const TrialSetup s = setup_trial(spec, options, sub);
    Outcome o;
    const double est =
        adaptive ? adaptive_predict(s.data, s.query, spec.estimator.family, spec.model,
                                    derive_seed(sub, kEstimatorStream))
                       .estimate
                 : mom_predict(s.data, s.query, report.resolved.config,
                               derive_seed(sub, kEstimatorStream));
    o.error = std::fabs(est - s.truth);
    if (report.pooled_k > 0) {
      const double pooled = base_predict(estimator::KNN{report.pooled_k}, s.data.view(), s.query,
                                         derive_seed(sub, kPooledStream));
      o.pooled_error = std::fabs(pooled - s.truth);
    }
    return o;
  });

  std::uint64_t hits = 0;
  report.errors.reserve(outcomes.size());
  for (const Outcome& o : outcomes) {
    report.errors.push_back(o.error);
    if (o.error >= options.threshold) ++hits;
    if (report.pooled_k > 0) {
      report.pooled_errors.push_back(o.pooled_error);
      if (o.pooled_error >= options.threshold) ++report.pooled_exceedances;
    }
  }
  report.estimate = make_tail_estimate(hits, options.trials, options.level);
  return report;
}

std::vector<AdaptiveLevelCheck> adaptive_guarantee_check(const ScenarioSpec& spec,
                                                         std::span<const double> deltas,
                                                         const TailOptions& options) {
  spec.validate();
  const Family family = spec.estimator.family;
  const double c = validity_constant(family, spec.model);
  std::vector<AdaptiveLevelCheck> checks;
  for (double delta : deltas) {
    AdaptiveLevelCheck chk;
    chk.delta = delta;
    chk.m_delta = m_delta(delta, c, spec.n);
    chk.width = 2.0 * radius_for_blocks(family, spec.model, spec.n, chk.m_delta);
    checks.push_back(chk);
  }

  struct Flags {
    std::vector<unsigned char> violated;
    std::vector<unsigned char> event;
  };
  const auto flags = run_trials(options.trials, options.jobs, [&](std::size_t t) {
    const std::uint64_t sub = derive_seed(options.seed, t);
    const TrialSetup s = setup_trial(spec, options, sub);
    const AdaptiveResult res =
        adaptive_predict(s.data, s.query, family, spec.model, derive_seed(sub, kEstimatorStream));
    Flags f;
    f.violated.resize(checks.size());
    f.event.resize(checks.size());
    for (std::size_t i = 0; i < checks.size(); ++i) {
      f.violated[i] = std::fabs(res.estimate - s.truth) > checks[i].width;
      bool covered = true;
      for (const ConfidenceInterval& iv : res.intervals) {
        if (iv.blocks >= checks[i].m_delta && !(s.truth >= iv.lower() && s.truth <= iv.upper())) {
          covered = false;
          break;
        }
      }
      f.event[i] = covered;
    }
    return f;
  });

  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::uint64_t violations = 0;
    for (const Flags& f : flags) {
      violations += f.violated[i];
      checks[i].event_trials += f.event[i];
      checks[i].event_violations += f.event[i] && f.violated[i];
    }
    checks[i].violations = make_tail_estimate(violations, options.trials, options.level);
  }
  return checks;
}

// ---------------------------------------------------------------------------

std::vector<NnDistanceCheck> expected_nn_distances(std::size_t dim, std::size_t sample_size,
                                                   std::span<const std::size_t> ranks,
                                                   std::span<const double> x,
                                                   std::size_t trials, std::uint64_t seed,
                                                   std::size_t jobs) {
  if (x.size() != dim) throw std::invalid_argument("expected_nn_distances: query dimension");
  if (trials < 2) throw std::invalid_argument("expected_nn_distances: need at least 2 trials");
  for (std::size_t r : ranks) {
    if (r < 1 || r > sample_size) {
      throw std::invalid_argument("expected_nn_distances: rank outside [1, N]");
    }
  }
  const auto per_trial = run_trials(trials, jobs, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> dist(sample_size);
    Point p(dim);
    for (auto& dv : dist) {
      for (auto& c : p) c = unif(rng);
      dv = euclidean_distance(p, x);
    }
    std::sort(dist.begin(), dist.end());
    std::vector<double> out(ranks.size());
    for (std::size_t k = 0; k < ranks.size(); ++k) out[k] = dist[ranks[k] - 1];
    return out;
  });

  const double rho = rho_unit_cube(dim);
  const double nn = static_cast<double>(trials);
  std::vector<NnDistanceCheck> out(ranks.size());
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& row : per_trial) {
      sum += row[k];
      sum_sq += row[k] * row[k];
    }
    const double mean = sum / nn;
    const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
    out[k].rank = ranks[k];
    out[k].mean = mean;
    out[k].std_error = std::sqrt(var / nn);
    out[k].bound = 2.0 * std::pow(static_cast<double>(ranks[k]) /
                                      (rho * static_cast<double>(sample_size + 1)),
                                  1.0 / static_cast<double>(dim));
  }
  return out;
}

NnDistanceCheck expected_nn_distance_check(std::size_t dim, std::size_t sample_size,
                                           std::size_t rank, std::span<const double> x,
                                           std::size_t trials, std::uint64_t seed) {
  const std::size_t ranks[] = {rank};
  return expected_nn_distances(dim, sample_size, ranks, x, trials, seed).front();
}

// ---------------------------------------------------------------------------

LowerBoundReport run_lower_bound(const LowerBoundConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("lower bound: trials must be >= 1");
  LowerBoundReport report;
  report.h = lower_bound_h(config.sigma, config.dim, config.n, config.delta);
  report.threshold = lower_bound_threshold(config.sigma, config.dim, config.n, config.delta);
  // At delta = 2^-(d+3) the bump width collapses; keep a single unit cell so
  // the instance stays well defined (the threshold is 0 there anyway).
  const double h = report.h > 0.0 ? report.h : 1.0;
  report.cells_per_axis = AdversarialRegression::cells_per_axis(h);
  report.cells = 1;
  for (std::size_t a = 0; a < config.dim; ++a) report.cells *= report.cells_per_axis;
  const double side = h * static_cast<double>(report.cells_per_axis);

  ModelClass model = default_model(config.dim, side, config.sigma);
  if (config.family == Family::mnn) model.alpha = std::pow(4.0, -static_cast<double>(config.dim));
  report.blocks = select_m(config.delta);
  if (report.blocks > config.n) throw std::invalid_argument("lower bound: more blocks than samples");

  BaseEstimatorKind base = estimator::KNN{1};
  if (config.parameter) {
    base = explicit_base(config.family, *config.parameter);
  } else {
    try {
      base = select_base(config.family, model, config.n, report.blocks);
    } catch (const ConfigurationError&) {
      report.tuning_fallback = true;
      switch (config.family) {
        case Family::knn: base = estimator::KNN{1}; break;
        case Family::bagged: base = estimator::BaggedOneNN{1, true}; break;
        case Family::mnn: base = estimator::MutualNN{1}; break;
        case Family::kernel: base = estimator::Kernel{model.diameter}; break;
        case Family::partition: base = estimator::Partition{1}; break;
      }
    }
  }
  const MoMConfig mom{report.blocks, base};
  validate(mom.base, config.n / report.blocks);
  report.estimator = describe(base);

  NoiseSpec noise;
  noise.sigma = config.sigma;

  struct Outcome {
    std::size_t cell = 0;
    bool exceeded = false;
  };
  auto simulate = [&](const AdversarialRegression& r, std::size_t trials, std::uint64_t seed) {
    return run_trials(trials, config.jobs, [&](std::size_t t) {
      const std::uint64_t sub = derive_seed(seed, t);
      const Dataset data = generate_dataset(config.n, config.dim, side, r, noise,
                                            derive_seed(sub, kDataStream));
      std::mt19937_64 rng(derive_seed(sub, kQueryStream));
      const Point x = sample_uniform_point(config.dim, side, rng);
      const double est = mom_predict(data, x, mom, derive_seed(sub, kEstimatorStream));
      return Outcome{*r.cell_of(x), std::fabs(est - r(x)) >= report.threshold};
    });
  };

  // Pilot: both global sign patterns, then keep the worse sign per cell.
  std::vector<std::size_t> hits_plus(report.cells, 0);
  std::vector<std::size_t> hits_minus(report.cells, 0);
  if (config.pilot_trials > 0) {
    const AdversarialRegression plus(std::vector<int>(report.cells, 1), h, config.dim);
    const AdversarialRegression minus(std::vector<int>(report.cells, -1), h, config.dim);
    for (const Outcome& o : simulate(plus, config.pilot_trials, derive_seed(config.seed, 1))) {
      hits_plus[o.cell] += o.exceeded;
    }
    for (const Outcome& o : simulate(minus, config.pilot_trials, derive_seed(config.seed, 2))) {
      hits_minus[o.cell] += o.exceeded;
    }
  }
  report.signs.resize(report.cells);
  for (std::size_t j = 0; j < report.cells; ++j) {
    report.signs[j] = hits_minus[j] > hits_plus[j] ? -1 : 1;
  }

  const AdversarialRegression worst(report.signs, h, config.dim);
  std::uint64_t hits = 0;
  for (const Outcome& o : simulate(worst, config.trials, derive_seed(config.seed, 3))) {
    hits += o.exceeded;
  }
  report.estimate = make_tail_estimate(hits, config.trials, config.level);
  return report;
}

}  // namespace momreg
