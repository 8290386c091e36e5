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
#include <string>
#include <vector>

namespace momreg {

/// Outcome of a deterministic inequality check over a parameter grid.
/// Slack is (bound - observed); a check fails when slack < 0.
struct OracleResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double min_slack = 0.0;
  double max_slack = 0.0;

  bool passed() const noexcept { return checks > 0 && failures == 0; }
};

/// P(Bin(m,p) >= m/2) <= (2 sqrt(p(1-p)))^m <= 2^m p^{m/2}
/// for m in [1,20], p in {0.005 j : j = 1..50}.
OracleResult binomial_majority_oracle();

/// P(Bin(m,p) >= m/4) <= (4/3^{3/4})^m p^{m/4} for m in [1,20], on the
/// 0.005 j grid and on 50 points of (0, 27/(4e)^4].
OracleResult binomial_quarter_oracle();

/// 2^m p^{m/2} = e^{-m} at p = 1/(4e^2), and (4/3^{3/4})^m p^{m/4} = e^{-m}
/// at p = 27/(4e)^4, for m in [1,50], within 1e-12 relative.
OracleResult level_identity_oracle();

/// sum_i v_i (i/(N+1))^{1/d} <= 2e k^{-1/d} for with-replacement bagging
/// weights, d in [1,6], N in {5,20,100,500}, at most 50 k per N.
OracleResult bagged_bias_oracle();

/// sum_i v_i^2 <= (2k/N)(1 + 1/N)^{2k} for with-replacement bagging weights
/// on the same (N, k) grid.
OracleResult bagged_variance_oracle();

/// Relative error of the g^2 quadrature against 1/(2(d+1)(d+2)) for d in
/// {1,2,3}; slack is tolerance - relative error.
OracleResult bump_quadrature_oracle(double tolerance = 1e-6);

/// Integral of g^2 over [-1/2,1/2]^d: midpoint rule on grids G and 2G
/// combined by Richardson extrapolation.
double bump_square_integral(std::size_t dim, std::size_t grid);

/// The k values checked for a given N: all of [1, N] when N <= 50, else 50
/// evenly spaced values including 1 and N.
std::vector<std::size_t> oracle_k_grid(std::size_t n);

std::vector<OracleResult> run_all_oracles();

}  // namespace momreg
