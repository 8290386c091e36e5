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
#include <span>
#include <string>
#include <variant>

#include "momreg/core.hpp"
#include "momreg/weights.hpp"

namespace momreg {

namespace estimator {

struct WeightedNN {
  WeightVector weights;
};
struct KNN {
  std::size_t k = 1;
};
struct BaggedOneNN {
  std::size_t k = 1;
  bool with_replacement = true;
};
struct MutualNN {
  std::size_t k = 1;
};
/// Naive (uniform) kernel over the closed ball of radius `bandwidth`.
struct Kernel {
  double bandwidth = 1.0;
};
/// Cubic partition of [0,1]^d into `cells_per_axis`^d cells.
struct Partition {
  std::size_t cells_per_axis = 1;
};

}  // namespace estimator

/// A base (per-block) local averaging rule together with its tuning parameter.
using BaseEstimatorKind =
    std::variant<estimator::WeightedNN, estimator::KNN, estimator::BaggedOneNN,
                 estimator::MutualNN, estimator::Kernel, estimator::Partition>;

/// Throws std::invalid_argument when the tuning parameter is illegal for a
/// block of `block_size` points.
void validate(const BaseEstimatorKind& kind, std::size_t block_size);

std::string describe(const BaseEstimatorKind& kind);

/// sum_i v_i Y_(i)(x) with ranks from order_by_distance.
double weighted_nn_predict(const BlockView& block, std::span<const double> x,
                           const WeightVector& v, std::uint64_t tie_seed);

/// Mean response over the mutual k-nearest neighbors of x: the points among
/// x's k nearest that also have x among their own k nearest once x is
/// inserted into the block. Returns 0 when that set is empty.
///
/// Ties are broken with the auxiliary uniforms of order_by_distance; the
/// inserted query draws the uniform at counter `block.size()` of the same
/// stream.
double mnn_predict(const BlockView& block, std::span<const double> x, std::size_t k,
                   std::uint64_t tie_seed);

/// Mean response over the closed ball ||X_i - x|| <= h; 0 if the ball is empty.
double kernel_predict(const BlockView& block, std::span<const double> x, double h);

/// Cell index of a point of [0,1]^d along each axis, min(floor(x_i K), K-1),
/// flattened row-major. Throws for coordinates outside [0,1].
std::size_t partition_cell(std::span<const double> x, std::size_t cells_per_axis);

/// Mean response over block points sharing x's cell; 0 if the cell is empty.
double partition_predict(const BlockView& block, std::span<const double> x,
                         std::size_t cells_per_axis);

double base_predict(const BaseEstimatorKind& kind, const BlockView& block,
                    std::span<const double> x, std::uint64_t tie_seed);

}  // namespace momreg
