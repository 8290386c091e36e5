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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momreg/base.hpp"
#include "momreg/core.hpp"

namespace momreg {

/// Estimator families for which closed-form tuning and confidence radii exist.
enum class Family { knn, bagged, mnn, kernel, partition };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Parameters of the regression model class: small-ball constant rho
/// (mu(B(x,eps)) >= rho eps^d on the support), conditional noise standard
/// deviation bound sigma, dimension, support diameter and, for mutual NN, the
/// doubling constant alpha in (0,1].
struct ModelClass {
  double rho = 1.0;
  double sigma = 1.0;
  std::size_t dim = 1;
  double diameter = 1.0;
  std::optional<double> alpha;

  /// rho, diameter > 0; sigma >= 0; rho <= diameter^-d; alpha in (0,1] if set.
  void validate() const;
};

struct MoMConfig {
  std::size_t blocks = 1;
  BaseEstimatorKind base = estimator::KNN{1};
};

/// Per-block base predictions at x; block j uses tie seed derive_seed(seed, j).
std::vector<double> block_predictions(const Dataset& data, std::span<const double> x,
                                      const MoMConfig& config, std::uint64_t seed);

/// Median of the per-block base predictions.
double mom_predict(const Dataset& data, std::span<const double> x, const MoMConfig& config,
                   std::uint64_t seed);

/// ceil(ln(1/delta)). Values of ln(1/delta) within 1e-12 (relative) of an
/// integer are snapped to it so that delta = e^-m maps back to m.
std::size_t select_m(double delta);

/// The family's validity constant c, so that 1 <= m <= c n guarantees the
/// selected tuning parameter is admissible. Bagged shares the k-NN constant.
double validity_constant(Family family, const ModelClass& model);

/// Admissible confidence levels [e^{-cn+1}, 1).
struct DeltaInterval {
  double lower = 0.0;
  double upper = 1.0;
  bool empty = false;

  bool contains(double delta) const noexcept {
    return !empty && delta >= lower && delta < upper;
  }
};

DeltaInterval admissible_delta(Family family, const ModelClass& model, std::size_t n);

/// floor((sigma^2/(32e^2))^{d/(d+2)} (rho n/m)^{2/(d+2)}), checked to lie in
/// [1, floor(n/m)].
std::size_t select_k_star_knn(const ModelClass& model, std::size_t n, std::size_t m);

/// floor((32e^2 n / (rho^{2/d} sigma^2 m))^{d/(d+2)}), same range check.
std::size_t select_k_star_bagged(const ModelClass& model, std::size_t n, std::size_t m);

/// floor((alpha sigma^2/(16e^2))^{d/(d+2)} (rho n/m)^{2/(d+2)}), same range check.
std::size_t select_k_star_mnn(const ModelClass& model, std::size_t n, std::size_t m);

/// (8e^2 sigma^2 m/(rho n))^{1/(d+2)}; must lie in (0, D].
double select_h_star(const ModelClass& model, std::size_t n, std::size_t m);

/// floor((rho d n/(2^{d+3} e^2 sigma^2 m))^{1/(d+2)}) >= 1.
std::size_t select_K_star(const ModelClass& model, std::size_t n, std::size_t m);

/// Runs the family's selector and wraps the result as a base estimator.
/// Bagged estimators resample with replacement.
BaseEstimatorKind select_base(Family family, const ModelClass& model, std::size_t n,
                              std::size_t m);

/// The family's numerical constant a in the radius a (sigma^2 m/(rho n))^{1/(d+2)}.
double radius_constant(Family family, const ModelClass& model);

/// Factor applied to a under contamination (m >= 4|O|): 4^3 e^2 / 27.
double robust_inflation();

struct ConfidenceRadius {
  Family family = Family::knn;
  double radius = 0.0;
  double constant_a = 0.0;
  double delta = 0.0;
  std::size_t blocks = 0;
  bool robust = false;
};

/// Radius a (sigma^2 ceil(ln(1/delta))/(rho n))^{1/(d+2)} whose exceedance
/// probability is at most delta. Throws ConfigurationError when delta is not
/// admissible.
ConfidenceRadius bound_radius(Family family, const ModelClass& model, std::size_t n,
                              double delta, bool robust = false);

/// Same closed form with an explicit block count (used for per-m intervals).
double radius_for_blocks(Family family, const ModelClass& model, std::size_t n, std::size_t m,
                         bool robust = false);

using RegressionFunction = std::function<double(std::span<const double>)>;

/// sup over [0,1]^d of |mom prediction - truth| for the median-of-means
/// partitioning estimate with K^d cells. The estimate is constant on each
/// cell; the truth is maximized over a grid of `grid_per_axis`^d cell-interior
/// midpoints. Throws ResourceError when K^d exceeds `cell_cap`.
double sup_error_partition(const Dataset& data, std::size_t m, std::size_t cells_per_axis,
                           std::uint64_t seed, const RegressionFunction& truth,
                           std::size_t grid_per_axis = 8, std::size_t cell_cap = 1'000'000);

}  // namespace momreg
