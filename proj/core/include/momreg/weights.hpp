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
#include <span>
#include <vector>

namespace momreg {

/// Probability vector (v_1, ..., v_N) over distance ranks, used by weighted
/// nearest-neighbor rules. Entries lie in [0,1] and sum to one within 1e-12.
class WeightVector {
 public:
  /// Validates user-supplied weights; throws std::invalid_argument.
  explicit WeightVector(std::vector<double> v);

  std::size_t size() const noexcept { return v_.size(); }
  double operator[](std::size_t i) const noexcept { return v_[i]; }
  std::span<const double> values() const noexcept { return v_; }

  /// Number of leading ranks up to and including the last nonzero weight.
  std::size_t support() const noexcept { return support_; }

 private:
  struct Trusted {};
  WeightVector(Trusted, std::vector<double> v);
  friend WeightVector make_scheme_weights(std::vector<double> v);

  std::vector<double> v_;
  std::size_t support_ = 0;
};

/// Compensated sum, used for normalization checks.
double compensated_sum(std::span<const double> values) noexcept;

/// Uniform k-NN: v_i = 1/k for i <= k.
WeightVector knn_weights(std::size_t k, std::size_t n);

/// Bagged 1-NN, resampling with replacement:
/// v_i = (1 - (i-1)/N)^k - (1 - i/N)^k.
WeightVector bagged_weights_with_replacement(std::size_t k, std::size_t n);

/// Bagged 1-NN, subsampling k points without replacement:
/// v_i = C(N-i, k-1) / C(N, k) for i <= N-k+1, else 0.
WeightVector bagged_weights_without_replacement(std::size_t k, std::size_t n);

}  // namespace momreg
