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

#include <algorithm>
#include <cmath>

#include "momreg/adaptive.hpp"
#include "momreg/errors.hpp"
#include "reference.hpp"

namespace momreg {
namespace {

using testing::Gen;

ConfidenceInterval iv(double lo, double hi, std::size_t m) {
  return {0.5 * (lo + hi), 0.5 * (hi - lo), m};
}

ModelClass unit_model() {
  ModelClass m;
  m.rho = 1.0;
  m.sigma = 0.05;
  m.dim = 1;
  m.diameter = 1.0;
  return m;
}

TEST(MDelta, Examples) {
  EXPECT_EQ(m_delta(0.5, 1.0, 100), 2u);
  EXPECT_EQ(m_delta(adaptive_level(4), 1.0, 100), 4u);
  EXPECT_EQ(m_delta(std::nextafter(adaptive_level(4), 0.0), 1.0, 100), 5u);
}

TEST(MDelta, RangeErrors) {
  EXPECT_THROW(m_delta(0.5, 0.001, 100), std::invalid_argument);
  EXPECT_THROW(m_delta(1.0, 1.0, 100), std::invalid_argument);
  EXPECT_THROW(m_delta(adaptive_level(11), 1.0, 10), std::invalid_argument);
  EXPECT_EQ(m_delta(adaptive_level(10), 1.0, 10), 10u);
}

TEST(MDelta, MinimalAndMonotone) {
  Gen g(51);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t top = g.integer(1, 30);
    const double lo = adaptive_level(top);
    const double delta = std::exp(g.uniform(std::log(lo), std::log(0.999)));
    const std::size_t m = m_delta(delta, 1.0, top);
    EXPECT_LE(adaptive_level(m), delta);
    if (m > 1) EXPECT_GT(adaptive_level(m - 1), delta);
    const double smaller = std::max(lo, delta * g.uniform(0.1, 1.0));
    EXPECT_GE(m_delta(smaller, 1.0, top), m);
  }
}

TEST(Suffix, Examples) {
  EXPECT_FALSE(first_nonempty_suffix({}).has_value());
  const std::vector<ConfidenceInterval> two = {iv(0, 2, 1), iv(3, 5, 2)};
  const auto hit = first_nonempty_suffix(two);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->position, 1u);
  EXPECT_EQ(hit->midpoint(), 4.0);
  const std::vector<ConfidenceInterval> nested = {iv(-4, 4, 1), iv(-1, 2, 2), iv(0, 1, 3)};
  EXPECT_EQ(first_nonempty_suffix(nested)->position, 0u);
  EXPECT_EQ(first_nonempty_suffix(nested)->midpoint(), 0.5);
  // Touching endpoints share a point.
  const std::vector<ConfidenceInterval> touch = {iv(0, 1, 1), iv(1, 2, 2)};
  EXPECT_EQ(first_nonempty_suffix(touch)->position, 0u);
}

TEST(Suffix, AgreesWithBruteForce) {
  Gen g(52);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t len = g.integer(1, 12);
    std::vector<ConfidenceInterval> list;
    for (std::size_t i = 0; i < len; ++i) {
      const double c = g.lattice(8) * 4.0;
      const double w = g.lattice(8) * 2.0;
      list.push_back({c, w, i + 1});
    }
    std::size_t expected = len - 1;
    for (std::size_t p = len; p-- > 0;) {
      double lo = -1e300;
      double hi = 1e300;
      for (std::size_t q = p; q < len; ++q) {
        lo = std::max(lo, list[q].lower());
        hi = std::min(hi, list[q].upper());
      }
      if (lo <= hi) expected = p;
    }
    const auto hit = first_nonempty_suffix(list);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->position, expected);
    for (std::size_t q = hit->position; q < len; ++q) {
      EXPECT_GE(hit->midpoint(), list[q].lower());
      EXPECT_LE(hit->midpoint(), list[q].upper());
    }
  }
}

TEST(IntervalFor, MatchesMomAndRadius) {
  Gen g(53);
  const ModelClass model = unit_model();
  const Dataset data = g.dataset(4000, 1);
  const Point x = {0.4};
  const std::size_t top = max_blocks(Family::knn, model, data.size());
  ASSERT_GE(top, 2u);
  double previous = 0.0;
  for (std::size_t m = 1; m <= std::min<std::size_t>(top, 8); ++m) {
    const ConfidenceInterval ci = interval_for(data, x, m, Family::knn, model, 9);
    const MoMConfig cfg{m, select_base(Family::knn, model, data.size(), m)};
    EXPECT_EQ(ci.center, mom_predict(data, x, cfg, 9));
    EXPECT_EQ(ci.half_width, radius_for_blocks(Family::knn, model, data.size(), m));
    EXPECT_GT(ci.half_width, previous);
    previous = ci.half_width;
  }
  EXPECT_THROW(interval_for(data, x, 0, Family::knn, model, 9), std::invalid_argument);
  EXPECT_THROW(interval_for(data, x, top + 1, Family::knn, model, 9), std::invalid_argument);
}

TEST(AdaptivePredict, EstimateLiesInSuffix) {
  Gen g(54);
  const ModelClass model = unit_model();
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset data = g.dataset(g.integer(500, 3000), 1, -0.1, 0.1);
    const Point x = g.point(1);
    const AdaptiveResult r = adaptive_predict(data, x, Family::knn, model, rep);
    EXPECT_EQ(r.m_max, max_blocks(Family::knn, model, data.size()));
    EXPECT_EQ(r.intervals.size() + r.skipped.size(), r.m_max);
    EXPECT_GE(r.m_hat, 1u);
    EXPECT_LE(r.m_hat, r.m_max);
    for (const auto& ci : r.intervals) {
      if (ci.blocks < r.m_hat) continue;
      EXPECT_GE(r.estimate, ci.lower());
      EXPECT_LE(r.estimate, ci.upper());
    }
  }
}

TEST(AdaptivePredict, NoFeasibleBlockCount) {
  ModelClass model = unit_model();
  model.sigma = 1e3;
  const Dataset data(1, {0.5}, {1.0});
  EXPECT_THROW(adaptive_predict(data, Point{0.5}, Family::knn, model, 0), ConfigurationError);
}

}  // namespace
}  // namespace momreg
