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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "momreg/adaptive.hpp"
#include "momreg/core.hpp"
#include "momreg/mom.hpp"

namespace momreg {

// ---------------------------------------------------------------------------
// Scenario description

/// 1-Lipschitz regression functions on [0, side]^d.
enum class Target {
  zero,    // r(x) = 0
  linear,  // r(x) = (x_1 + ... + x_d) / sqrt(d)
  sine,    // r(x) = sin((x_1 + ... + x_d) / sqrt(d))
  cone,    // r(x) = ||x - center of the unit cube||
};

std::string to_string(Target t);
Target target_from_string(const std::string& name);
double evaluate_target(Target t, std::span<const double> x);

/// Centered noise rescaled to variance exactly sigma^2.
struct NoiseSpec {
  enum class Kind { gaussian, student_t, pareto };
  Kind kind = Kind::gaussian;
  double sigma = 1.0;
  double nu = 3.0;          // Student-t degrees of freedom, > 2
  double tail_index = 3.0;  // symmetric Pareto tail index, > 2

  void validate() const;
};

std::string to_string(NoiseSpec::Kind k);
NoiseSpec::Kind noise_kind_from_string(const std::string& name);
double sample_noise(const NoiseSpec& noise, std::mt19937_64& rng);

/// How the estimator under test is configured. Either `delta` or `blocks`
/// fixes the block count (delta = e^{-m} when only m is given); `parameter`
/// overrides the closed-form tuning (k, h or K).
struct EstimatorSpec {
  enum class Mode { mom, adaptive };
  Family family = Family::knn;
  Mode mode = Mode::mom;
  std::optional<double> delta;
  std::optional<std::size_t> blocks;
  std::optional<double> parameter;
  bool robust = false;
  bool compare_pooled = false;  // also run the single-block k-NN estimate
};

/// Outliers replace `outliers` samples with (x, y = magnitude). Block
/// placement puts them round-robin at the heads of the `blocks` contiguous
/// blocks, so q outliers corrupt min(q, m) blocks; random placement picks a
/// uniform subset.
struct ContaminationSpec {
  enum class Placement { block_concentrated, uniform_random };
  std::size_t outliers = 0;
  Placement placement = Placement::block_concentrated;
  std::size_t blocks = 1;
  double magnitude = 1e6;
  std::optional<Point> location;  // default: uniform on the support
};

enum class QueryPolicy { fixed, random };

struct ScenarioSpec {
  std::string id = "scenario";
  std::size_t dim = 1;
  std::size_t n = 1;
  double support_side = 1.0;  // X ~ Unif([0, side]^d)
  Target target = Target::linear;
  NoiseSpec noise;
  ModelClass model;
  EstimatorSpec estimator;
  std::optional<ContaminationSpec> contamination;
  std::size_t trials = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Default model for a scenario: rho = rho_unit_cube(d) / side^d, sigma from
/// the noise, diameter side sqrt(d).
ModelClass default_model(std::size_t dim, double support_side, double sigma);

/// Block count, level and base estimator implied by an EstimatorSpec.
struct ResolvedEstimator {
  std::size_t blocks = 1;
  double delta = 0.0;
  MoMConfig config;
};

ResolvedEstimator resolve_estimator(const ScenarioSpec& spec);

// ---------------------------------------------------------------------------
// Data generation and contamination

/// Small-ball constant of the uniform law on a unit cube:
/// pi^{d/2} / (2^d d^{d/2} Gamma(1 + d/2)).
double rho_unit_cube(std::size_t d);

Point sample_uniform_point(std::size_t dim, double side, std::mt19937_64& rng);

Dataset generate_dataset(std::size_t n, std::size_t dim, double side,
                         const RegressionFunction& truth, const NoiseSpec& noise,
                         std::uint64_t seed);

/// n i.i.d. samples Y = r(X) + eps of the scenario; reproducible from `seed`.
Dataset generate_dataset(const ScenarioSpec& spec, std::uint64_t seed);
Dataset generate_dataset(const ScenarioSpec& spec);

struct ContaminationResult {
  Dataset data;
  std::vector<std::size_t> outliers;  // sorted
};

ContaminationResult contaminate(const Dataset& data, const ContaminationSpec& spec,
                                std::uint64_t seed, double support_side = 1.0);

/// m >= 4 |O|.
constexpr bool contamination_budget_ok(std::size_t blocks, std::size_t outliers) noexcept {
  return blocks >= 4 * outliers;
}

// ---------------------------------------------------------------------------
// Lower-bound instances

/// dist(x, boundary of [-1/2,1/2]^d) inside the cube, 0 outside.
double lower_bound_g(std::span<const double> x);

/// sum_j c_j h g((x - a_j)/h) over the ceil(1/h)^d cells of side h tiling
/// S = [0, h ceil(1/h)]^d. Zero outside S.
class AdversarialRegression {
 public:
  AdversarialRegression(std::vector<int> signs, double h, std::size_t dim);

  static std::size_t cells_per_axis(double h);

  double operator()(std::span<const double> x) const;
  /// Flattened cell index of x, or nullopt when x lies outside S.
  std::optional<std::size_t> cell_of(std::span<const double> x) const;
  Point cell_center(std::size_t cell) const;

  double bandwidth() const noexcept { return h_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t cells() const noexcept { return signs_.size(); }
  double support_side() const noexcept { return h_ * static_cast<double>(per_axis_); }
  const std::vector<int>& signs() const noexcept { return signs_; }

 private:
  std::vector<int> signs_;
  double h_;
  std::size_t dim_;
  std::size_t per_axis_;
};

AdversarialRegression adversarial_regression(std::vector<int> signs, double h, std::size_t dim);

/// (pi sigma^2 (d+1)(d+2) ln(1/(2^{d+3} delta)) / n)^{1/(d+2)} for
/// delta in (0, 2^{-(d+3)}]. The boundary delta = 2^{-(d+3)} gives h = 0.
double lower_bound_h(double sigma, std::size_t dim, std::size_t n, double delta);

/// (1/4) (sigma^2 ln(1/(2^{d+3} delta)) / n)^{1/(d+2)}.
double lower_bound_threshold(double sigma, std::size_t dim, std::size_t n, double delta);

// ---------------------------------------------------------------------------
// Monte Carlo tail certification

struct TailEstimate {
  std::uint64_t exceedances = 0;
  std::uint64_t trials = 0;
  double point = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  double level = 0.95;
};

TailEstimate make_tail_estimate(std::uint64_t exceedances, std::uint64_t trials,
                                double level = 0.95);

/// True when even zero exceedances could not certify `delta`.
bool underpowered(std::uint64_t trials, double delta, double level = 0.95);

struct TailReport {
  TailEstimate estimate;
  double threshold = 0.0;
  ResolvedEstimator resolved;
  std::vector<double> errors;         // |estimate - r(query)| per trial
  std::vector<double> pooled_errors;  // single-block k-NN, when requested
  std::size_t pooled_k = 0;
  std::uint64_t pooled_exceedances = 0;
};

struct TailOptions {
  double threshold = 0.0;
  QueryPolicy query = QueryPolicy::fixed;
  Point query_point;  // empty: center of the support
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  double level = 0.95;
};

/// Runs independent replications (fresh data, optional contamination, fresh
/// query under the random policy) and counts |estimate - r(query)| >= threshold.
/// Trial t draws from derive_seed(seed, t) only.
TailReport estimate_tail(const ScenarioSpec& spec, const TailOptions& options);

/// Default certification threshold of a scenario: the (robust) confidence
/// radius for MoM mode, the full width 2 half_width(m_delta) for adaptive mode.
double default_threshold(const ScenarioSpec& spec);

/// Adaptive estimator checked against its width guarantee for several levels
/// at once, on the same replications.
struct AdaptiveLevelCheck {
  double delta = 0.0;
  std::size_t m_delta = 0;
  double width = 0.0;  // |I_{m_delta}| = 2 half_width(m_delta)
  TailEstimate violations;
  std::uint64_t event_trials = 0;      // trials where r(x) lies in every I_j, j >= m_delta
  std::uint64_t event_violations = 0;  // guarantee broken although the event held
};

std::vector<AdaptiveLevelCheck> adaptive_guarantee_check(const ScenarioSpec& spec,
                                                         std::span<const double> deltas,
                                                         const TailOptions& options);

// ---------------------------------------------------------------------------
// Nearest-neighbor distance control

struct NnDistanceCheck {
  std::size_t rank = 1;
  double mean = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // 2 (i / (rho (N+1)))^{1/d}
};

/// Monte Carlo E[D_(i)(x)] for N uniform points on [0,1]^d, for each rank.
std::vector<NnDistanceCheck> expected_nn_distances(std::size_t dim, std::size_t sample_size,
                                                   std::span<const std::size_t> ranks,
                                                   std::span<const double> x,
                                                   std::size_t trials, std::uint64_t seed,
                                                   std::size_t jobs = 1);

NnDistanceCheck expected_nn_distance_check(std::size_t dim, std::size_t sample_size,
                                           std::size_t rank, std::span<const double> x,
                                           std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Lower-bound experiment

struct LowerBoundConfig {
  std::size_t dim = 1;
  double sigma = 1.0;
  std::size_t n = 64;
  double delta = 1.0 / 64.0;
  Family family = Family::knn;
  std::optional<double> parameter;
  std::size_t trials = 10000;
  std::size_t pilot_trials = 2000;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  double level = 0.95;
};

struct LowerBoundReport {
  double h = 0.0;
  std::size_t cells_per_axis = 0;
  std::size_t cells = 0;
  double threshold = 0.0;
  std::size_t blocks = 0;
  std::string estimator;
  bool tuning_fallback = false;  // closed-form tuning infeasible; smallest legal value used
  std::vector<int> signs;
  TailEstimate estimate;
};

/// Builds the adversarial instance for (d, sigma, n, delta), picks each cell's
/// sign by a pilot Monte Carlo against the median-of-means estimator, and
/// estimates P(|r_hat(X) - r(X)| >= lower_bound_threshold) with fresh X.
LowerBoundReport run_lower_bound(const LowerBoundConfig& config);

}  // namespace momreg
