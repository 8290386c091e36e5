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

#include "momreg/base.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace momreg {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(const BlockView& block, std::span<const double> x, const char* who) {
  if (x.size() != block.dim()) {
    throw std::invalid_argument(std::string(who) + ": query dimension " +
                                std::to_string(x.size()) + " != block dimension " +
                                std::to_string(block.dim()));
  }
}

void check_k(std::size_t k, std::size_t n, const char* who) {
  if (k < 1 || k > n) {
    throw std::invalid_argument(std::string(who) + ": k=" + std::to_string(k) +
                                " outside [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

void validate(const BaseEstimatorKind& kind, std::size_t block_size) {
  std::visit(overloaded{
                 [&](const estimator::WeightedNN& w) {
                   if (w.weights.size() != block_size) {
                     throw std::invalid_argument("weighted NN: weight vector length " +
                                                 std::to_string(w.weights.size()) +
                                                 " != block size " +
                                                 std::to_string(block_size));
                   }
                 },
                 [&](const estimator::KNN& e) { check_k(e.k, block_size, "knn"); },
                 [&](const estimator::BaggedOneNN& e) { check_k(e.k, block_size, "bagged"); },
                 [&](const estimator::MutualNN& e) { check_k(e.k, block_size, "mnn"); },
                 [&](const estimator::Kernel& e) {
                   if (!(e.bandwidth > 0.0) || !std::isfinite(e.bandwidth)) {
                     throw std::invalid_argument("kernel: bandwidth must be positive and finite");
                   }
                 },
                 [&](const estimator::Partition& e) {
                   if (e.cells_per_axis < 1) {
                     throw std::invalid_argument("partition: need at least one cell per axis");
                   }
                 },
             },
             kind);
}

std::string describe(const BaseEstimatorKind& kind) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const estimator::WeightedNN& w) { os << "weighted_nn(N=" << w.weights.size() << ")"; },
                 [&](const estimator::KNN& e) { os << "knn(k=" << e.k << ")"; },
                 [&](const estimator::BaggedOneNN& e) {
                   os << (e.with_replacement ? "bagged(k=" : "bagged_subsample(k=") << e.k << ")";
                 },
                 [&](const estimator::MutualNN& e) { os << "mnn(k=" << e.k << ")"; },
                 [&](const estimator::Kernel& e) { os << "kernel(h=" << e.bandwidth << ")"; },
                 [&](const estimator::Partition& e) { os << "partition(K=" << e.cells_per_axis << ")"; },
             },
             kind);
  return os.str();
}

double weighted_nn_predict(const BlockView& block, std::span<const double> x,
                           const WeightVector& v, std::uint64_t tie_seed) {
  check_dim(block, x, "weighted_nn_predict");
  if (v.size() != block.size()) {
    throw std::invalid_argument("weighted_nn_predict: weight vector length " +
                                std::to_string(v.size()) + " != block size " +
                                std::to_string(block.size()));
  }
  const DistanceOrder order = order_by_distance(block, x, tie_seed, v.support());
  double acc = 0.0;
  for (std::size_t r = 0; r < order.permutation.size(); ++r) {
    acc += v[r] * block.response(order.permutation[r]);
  }
  return acc;
}

double mnn_predict(const BlockView& block, std::span<const double> x, std::size_t k,
                   std::uint64_t tie_seed) {
  check_dim(block, x, "mnn_predict");
  const std::size_t n = block.size();
  check_k(k, n, "mnn_predict");

  const DistanceOrder near = order_by_distance(block, x, tie_seed, k);
  const double u_query = tie_uniform(tie_seed, n);

  double sum = 0.0;
  std::size_t mutual = 0;
  for (std::size_t r = 0; r < near.permutation.size(); ++r) {
    const std::size_t i = near.permutation[r];
    const auto xi = block.point(i);
    // x is among the k nearest of X_i in (block \ {X_i}) U {x} iff fewer
    // than k of the other block points rank strictly ahead of x.
    const double d_query = near.distances[r];
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < n && ahead < k; ++j) {
      if (j == i) continue;
      const double dj = euclidean_distance(block.point(j), xi);
      if (dj < d_query || (dj == d_query && tie_uniform(tie_seed, j) < u_query)) ++ahead;
    }
    if (ahead < k) {
      sum += block.response(i);
      ++mutual;
    }
  }
  return mutual == 0 ? 0.0 : sum / static_cast<double>(mutual);
}

double kernel_predict(const BlockView& block, std::span<const double> x, double h) {
  check_dim(block, x, "kernel_predict");
  if (!(h > 0.0)) throw std::invalid_argument("kernel_predict: bandwidth must be positive");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (euclidean_distance(block.point(i), x) <= h) {
      sum += block.response(i);
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::size_t partition_cell(std::span<const double> x, std::size_t cells_per_axis) {
  if (cells_per_axis < 1) throw std::invalid_argument("partition: need at least one cell per axis");
  const double kk = static_cast<double>(cells_per_axis);
  std::size_t cell = 0;
  for (double c : x) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::invalid_argument("partition: coordinate outside [0,1]");
    }
    const auto idx = std::min(static_cast<std::size_t>(std::floor(c * kk)), cells_per_axis - 1);
    cell = cell * cells_per_axis + idx;
  }
  return cell;
}

double partition_predict(const BlockView& block, std::span<const double> x,
                         std::size_t cells_per_axis) {
  check_dim(block, x, "partition_predict");
  const std::size_t target = partition_cell(x, cells_per_axis);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (partition_cell(block.point(i), cells_per_axis) == target) {
      sum += block.response(i);
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double base_predict(const BaseEstimatorKind& kind, const BlockView& block,
                    std::span<const double> x, std::uint64_t tie_seed) {
  validate(kind, block.size());
  return std::visit(
      overloaded{
          [&](const estimator::WeightedNN& e) {
            return weighted_nn_predict(block, x, e.weights, tie_seed);
          },
          [&](const estimator::KNN& e) {
            return weighted_nn_predict(block, x, knn_weights(e.k, block.size()), tie_seed);
          },
          [&](const estimator::BaggedOneNN& e) {
            const WeightVector v = e.with_replacement
                                       ? bagged_weights_with_replacement(e.k, block.size())
                                       : bagged_weights_without_replacement(e.k, block.size());
            return weighted_nn_predict(block, x, v, tie_seed);
          },
          [&](const estimator::MutualNN& e) { return mnn_predict(block, x, e.k, tie_seed); },
          [&](const estimator::Kernel& e) { return kernel_predict(block, x, e.bandwidth); },
          [&](const estimator::Partition& e) {
            return partition_predict(block, x, e.cells_per_axis);
          },
      },
      kind);
}

}  // namespace momreg
