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

namespace momreg {

/// Exact P(Bin(m, p) >= threshold) by direct summation.
double binomial_upper_tail(std::size_t m, double p, double threshold);

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
struct ProportionInterval {
  double lower = 0.0;
  double upper = 1.0;
};

ProportionInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                   double level = 0.95);

/// Empirical quantile with linear interpolation between order statistics
/// (type 7). `q` in [0,1].
double empirical_quantile(std::span<const double> values, double q);

}  // namespace momreg
