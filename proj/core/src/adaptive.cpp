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

#include "momreg/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "momreg/errors.hpp"

namespace momreg {

std::size_t max_blocks(Family family, const ModelClass& model, std::size_t n) {
  const double c = validity_constant(family, model);
  return static_cast<std::size_t>(std::floor(c * static_cast<double>(n)));
}

ConfidenceInterval interval_for(const Dataset& data, std::span<const double> x, std::size_t m,
                                Family family, const ModelClass& model, std::uint64_t seed) {
  const std::size_t n = data.size();
  const std::size_t top = max_blocks(family, model, n);
  if (m < 1 || m > top) {
    throw std::invalid_argument("interval_for: m=" + std::to_string(m) + " outside [1, " +
                                std::to_string(top) + "]");
  }
  MoMConfig config{m, select_base(family, model, n, m)};
  ConfidenceInterval out;
  out.blocks = m;
  out.center = mom_predict(data, x, config, seed);
  out.half_width = radius_for_blocks(family, model, n, m);
  return out;
}

std::optional<SuffixIntersection> first_nonempty_suffix(
    std::span<const ConfidenceInterval> intervals) {
  if (intervals.empty()) return std::nullopt;
  SuffixIntersection best;
  best.position = intervals.size() - 1;
  best.lower = intervals.back().lower();
  best.upper = intervals.back().upper();
  double lo = best.lower;
  double hi = best.upper;
  for (std::size_t p = intervals.size() - 1; p-- > 0;) {
    lo = std::max(lo, intervals[p].lower());
    hi = std::min(hi, intervals[p].upper());
    if (lo > hi) break;  // suffixes only shrink as p decreases
    best = {p, lo, hi};
  }
  return best;
}

AdaptiveResult adaptive_predict(const Dataset& data, std::span<const double> x, Family family,
                                const ModelClass& model, std::uint64_t seed) {
  const std::size_t n = data.size();
  AdaptiveResult out;
  out.m_max = max_blocks(family, model, n);
  if (out.m_max < 1) throw ConfigurationError("floor(c n) >= 1", 1.0, static_cast<double>(out.m_max));
  out.intervals.reserve(out.m_max);
  for (std::size_t m = 1; m <= out.m_max; ++m) {
    try {
      out.intervals.push_back(interval_for(data, x, m, family, model, seed));
    } catch (const ConfigurationError&) {
      out.skipped.push_back(m);
    }
  }
  const auto hit = first_nonempty_suffix(out.intervals);
  if (!hit) {
    throw ConfigurationError("feasible block counts >= 1", 1.0, 0.0);
  }
  out.m_hat = out.intervals[hit->position].blocks;
  out.estimate = hit->midpoint();
  return out;
}

double adaptive_level(std::size_t m) noexcept {
  return std::exp(-static_cast<double>(m)) / (1.0 - std::exp(-1.0));
}

std::size_t m_delta(double delta, double c, std::size_t n) {
  const auto top = static_cast<std::size_t>(std::floor(c * static_cast<double>(n)));
  if (top < 1) throw std::invalid_argument("m_delta: floor(c n) must be at least 1");
  if (!(delta < 1.0) || !(delta >= adaptive_level(top))) {
    throw std::invalid_argument("m_delta: delta outside [e^{-floor(cn)}/(1-e^{-1}), 1)");
  }
  for (std::size_t m = 1; m <= top; ++m) {
    if (adaptive_level(m) <= delta) return m;
  }
  return top;
}

}  // namespace momreg
