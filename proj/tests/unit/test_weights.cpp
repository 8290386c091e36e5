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

#include <cmath>
#include <numbers>

#include "momreg/weights.hpp"
#include "reference.hpp"

namespace momreg {
namespace {

using testing::Gen;

void expect_weights(const WeightVector& v, std::vector<double> expected) {
  ASSERT_EQ(v.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(v[i], expected[i], 1e-15) << i;
}

// C(N-i, k-1) / C(N, k) as a long double product, i is 1-based.
long double min_rank_probability(std::size_t k, std::size_t n, std::size_t i) {
  if (i > n - k + 1) return 0.0L;
  // C(N-i, k-1)/C(N,k) = k/N * prod_{t=1}^{k-1} (N-i-t+1)/(N-t)
  long double p = static_cast<long double>(k) / n;
  for (std::size_t t = 1; t < k; ++t) {
    p *= static_cast<long double>(n - i - t + 1) / static_cast<long double>(n - t);
  }
  return p;
}

TEST(KnnWeights, Examples) {
  expect_weights(knn_weights(2, 4), {0.5, 0.5, 0, 0});
  expect_weights(knn_weights(3, 3), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  expect_weights(knn_weights(1, 5), {1, 0, 0, 0, 0});
}

TEST(BaggedWithReplacement, Examples) {
  expect_weights(bagged_weights_with_replacement(1, 4), {0.25, 0.25, 0.25, 0.25});
  expect_weights(bagged_weights_with_replacement(2, 3), {5.0 / 9, 3.0 / 9, 1.0 / 9});
}

TEST(BaggedWithoutReplacement, Examples) {
  expect_weights(bagged_weights_without_replacement(2, 3), {2.0 / 3, 1.0 / 3, 0});
  expect_weights(bagged_weights_without_replacement(4, 4), {1, 0, 0, 0});
  expect_weights(bagged_weights_without_replacement(1, 5), {0.2, 0.2, 0.2, 0.2, 0.2});
}

TEST(Weights, OutOfRangeK) {
  for (auto f : {knn_weights, bagged_weights_with_replacement, bagged_weights_without_replacement}) {
    EXPECT_THROW(f(0, 5), std::invalid_argument);
    EXPECT_THROW(f(6, 5), std::invalid_argument);
  }
}

TEST(WeightVector, Validation) {
  EXPECT_NO_THROW(WeightVector({0.5, 0.5}));
  EXPECT_THROW(WeightVector({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(WeightVector({1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(WeightVector(std::vector<double>{}), std::invalid_argument);
  EXPECT_EQ(WeightVector({0.5, 0.5, 0.0}).support(), 2u);
  EXPECT_EQ(WeightVector({0.0, 1.0, 0.0}).support(), 2u);
}

TEST(Weights, SumNonnegativeNonincreasing) {
  Gen g(21);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = g.integer(1, 3000);
    const std::size_t k = g.integer(1, n);
    for (const WeightVector& v : {knn_weights(k, n), bagged_weights_with_replacement(k, n),
                                  bagged_weights_without_replacement(k, n)}) {
      ASSERT_EQ(v.size(), n);
      EXPECT_NEAR(compensated_sum(v.values()), 1.0, 1e-12);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_GE(v[i], 0.0);
        if (i > 0) EXPECT_LE(v[i], v[i - 1] * (1 + 1e-12)) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(BaggedWithoutReplacement, MatchesMinRankLaw) {
  Gen g(22);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = g.integer(1, 400);
    const std::size_t k = g.integer(1, n);
    const WeightVector v = bagged_weights_without_replacement(k, n);
    for (std::size_t i = 1; i <= n; ++i) {
      const double expected = static_cast<double>(min_rank_probability(k, n, i));
      EXPECT_NEAR(v[i - 1], expected, 1e-13 + 1e-12 * expected);
    }
  }
}

TEST(BaggedWithReplacement, MatchesClosedForm) {
  Gen g(23);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = g.integer(1, 400);
    const std::size_t k = g.integer(1, n);
    const WeightVector v = bagged_weights_with_replacement(k, n);
    for (std::size_t i = 1; i <= n; ++i) {
      const long double a = std::pow(1.0L - static_cast<long double>(i - 1) / n, k);
      const long double b = std::pow(1.0L - static_cast<long double>(i) / n, k);
      EXPECT_NEAR(v[i - 1], static_cast<double>(a - b), 1e-14);
    }
  }
}

TEST(BaggedWithReplacement, VarianceBound) {
  Gen g(24);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = g.integer(1, 2000);
    const std::size_t k = g.integer(1, n);
    const WeightVector v = bagged_weights_with_replacement(k, n);
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(v[i]) * v[i];
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    EXPECT_LE(static_cast<double>(s), 2.0 * kd / nd * std::pow(1.0 + 1.0 / nd, 2.0 * kd));
  }
}

TEST(BaggedWithReplacement, BiasBound) {
  Gen g(25);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = g.integer(1, 500);
    const std::size_t k = g.integer(1, n);
    const std::size_t d = g.integer(1, 6);
    const WeightVector v = bagged_weights_with_replacement(k, n);
    long double s = 0.0L;
    for (std::size_t i = 1; i <= n; ++i) {
      s += v[i - 1] * std::pow(static_cast<long double>(i) / (n + 1), 1.0L / d);
    }
    EXPECT_LE(static_cast<double>(s),
              2.0 * std::numbers::e * std::pow(static_cast<double>(k), -1.0 / d));
  }
}

TEST(CompensatedSum, RecoversSmallTerms) {
  std::vector<double> v = {1.0, 1e-17, 1e-17, -1.0};
  EXPECT_DOUBLE_EQ(compensated_sum(v), 2e-17);
}

}  // namespace
}  // namespace momreg
