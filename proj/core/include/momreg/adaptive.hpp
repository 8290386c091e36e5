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
#include <span>
#include <vector>

#include "momreg/core.hpp"
#include "momreg/mom.hpp"

namespace momreg {

/// Symmetric interval center +- half_width produced with `blocks` blocks, at
/// confidence level 1 - e^{-blocks}.
struct ConfidenceInterval {
  double center = 0.0;
  double half_width = 0.0;
  std::size_t blocks = 0;

  double lower() const noexcept { return center - half_width; }
  double upper() const noexcept { return center + half_width; }
};

/// Largest block count covered by the adaptive construction: floor(c n).
std::size_t max_blocks(Family family, const ModelClass& model, std::size_t n);

/// Median-of-means estimate with `m` blocks and the m-optimal tuning parameter,
/// widened by a (sigma^2 m/(rho n))^{1/(d+2)}. Throws std::invalid_argument
/// for m outside [1, floor(c n)] and ConfigurationError when the tuning
/// parameter for this m is not admissible.
ConfidenceInterval interval_for(const Dataset& data, std::span<const double> x, std::size_t m,
                                Family family, const ModelClass& model, std::uint64_t seed);

struct SuffixIntersection {
  std::size_t position = 0;  // index into the interval list where the suffix starts
  double lower = 0.0;
  double upper = 0.0;

  double midpoint() const noexcept { return 0.5 * (lower + upper); }
};

/// Smallest position p such that intervals[p..end) share a common point,
/// found by a running max/min sweep from the back. Returns nullopt only for
/// an empty list.
std::optional<SuffixIntersection> first_nonempty_suffix(
    std::span<const ConfidenceInterval> intervals);

struct AdaptiveResult {
  double estimate = 0.0;
  std::size_t m_hat = 0;
  std::size_t m_max = 0;
  std::vector<ConfidenceInterval> intervals;  // feasible m only, increasing m
  std::vector<std::size_t> skipped;           // m whose tuning parameter was inadmissible
};

/// Confidence-level-free estimate: midpoint of the first nonempty suffix
/// intersection of the intervals for m = 1..floor(c n).
AdaptiveResult adaptive_predict(const Dataset& data, std::span<const double> x, Family family,
                                const ModelClass& model, std::uint64_t seed);

/// Smallest m in [1, m_max] with e^{-m}/(1 - e^{-1}) <= delta, where
/// m_max = floor(c n).
std::size_t m_delta(double delta, double c, std::size_t n);

/// The level that m blocks certify under the adaptive construction:
/// e^{-m}/(1 - e^{-1}).
double adaptive_level(std::size_t m) noexcept;

}  // namespace momreg
