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

#include "momreg/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "momreg/errors.hpp"

namespace momreg {
namespace {

constexpr double kSumTolerance = 1e-12;

std::size_t last_nonzero(const std::vector<double>& v) {
  std::size_t s = v.size();
  while (s > 0 && v[s - 1] == 0.0) --s;
  return s;
}

void check_k(std::size_t k, std::size_t n, const char* who) {
  if (k < 1 || k > n) {
    throw std::invalid_argument(std::string(who) + ": k=" + std::to_string(k) +
                                " outside [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

double compensated_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

WeightVector::WeightVector(std::vector<double> v) : v_(std::move(v)) {
  if (v_.empty()) throw std::invalid_argument("WeightVector: empty");
  for (double w : v_) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("WeightVector: entries must lie in [0,1]");
    }
  }
  const double s = compensated_sum(v_);
  if (std::fabs(s - 1.0) > kSumTolerance) {
    throw std::invalid_argument("WeightVector: entries must sum to 1");
  }
  support_ = last_nonzero(v_);
}

WeightVector::WeightVector(Trusted, std::vector<double> v) : v_(std::move(v)) {
  support_ = last_nonzero(v_);
}

// Closed-form schemes are exactly normalized; a deviation is a bug.
WeightVector make_scheme_weights(std::vector<double> v) {
  const double s = compensated_sum(v);
  if (std::fabs(s - 1.0) > kSumTolerance) {
    throw ConsistencyError("weight scheme sums to " + std::to_string(s));
  }
  return WeightVector(WeightVector::Trusted{}, std::move(v));
}

WeightVector knn_weights(std::size_t k, std::size_t n) {
  check_k(k, n, "knn_weights");
  std::vector<double> v(n, 0.0);
  const double w = 1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = w;
  return make_scheme_weights(std::move(v));
}

WeightVector bagged_weights_with_replacement(std::size_t k, std::size_t n) {
  check_k(k, n, "bagged_weights_with_replacement");
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  std::vector<double> v(n);
  double prev = 1.0;  // (1 - 0/N)^k
  for (std::size_t i = 1; i <= n; ++i) {
    const double cur = i == n ? 0.0 : std::pow(1.0 - static_cast<double>(i) / nn, kk);
    v[i - 1] = prev - cur;
    // pow is inexact below DBL_MIN; keep the weights nonincreasing.
    if (i > 1) v[i - 1] = std::min(v[i - 1], v[i - 2]);
    prev = cur;
  }
  return make_scheme_weights(std::move(v));
}

WeightVector bagged_weights_without_replacement(std::size_t k, std::size_t n) {
  check_k(k, n, "bagged_weights_without_replacement");
  // P(min rank of a k-subset = i) = C(N-i, k-1) / C(N, k). Evaluated as
  // v_1 = k/N, v_{i+1} = v_i (N-i-k+1)/(N-i): no overflow, a few ulps of
  // relative error per rank.
  std::vector<double> v(n, 0.0);
  double w = static_cast<double>(k) / static_cast<double>(n);
  const std::size_t last = n - k + 1;
  for (std::size_t i = 1; i <= last; ++i) {
    v[i - 1] = w;
    if (i < last) w *= static_cast<double>(n - i - k + 1) / static_cast<double>(n - i);
  }
  return make_scheme_weights(std::move(v));
}

}  // namespace momreg
