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

#include "momreg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace momreg {

double binomial_upper_tail(std::size_t m, double p, double threshold) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_upper_tail: p outside [0,1]");
  const double start = std::max(0.0, std::ceil(threshold));
  double total = 0.0;
  double coeff = 1.0;  // C(m, j), exact for the m used here
  for (std::size_t j = 0; j <= m; ++j) {
    if (static_cast<double>(j) >= start) {
      total += coeff * std::pow(p, static_cast<double>(j)) *
               std::pow(1.0 - p, static_cast<double>(m - j));
    }
    coeff = coeff * static_cast<double>(m - j) / static_cast<double>(j + 1);
  }
  return total;
}

ProportionInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0) throw std::invalid_argument("clopper_pearson: no trials");
  if (successes > trials) throw std::invalid_argument("clopper_pearson: successes > trials");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("clopper_pearson: bad level");
  const double alpha = 1.0 - level;
  const auto x = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  ProportionInterval out;
  out.lower = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
  out.upper = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
  return out;
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("empirical_quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("empirical_quantile: q outside [0,1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace momreg
