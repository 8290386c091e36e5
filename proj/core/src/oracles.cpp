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

#include "momreg/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "momreg/harness.hpp"
#include "momreg/stats.hpp"
#include "momreg/weights.hpp"

namespace momreg {
namespace {

constexpr double kE = std::numbers::e;

class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); }

  void check(double bound, double observed) {
    const double slack = bound - observed;
    if (result_.checks == 0) {
      result_.min_slack = slack;
      result_.max_slack = slack;
    } else {
      result_.min_slack = std::min(result_.min_slack, slack);
      result_.max_slack = std::max(result_.max_slack, slack);
    }
    ++result_.checks;
    if (!(slack >= 0.0)) ++result_.failures;
  }

  OracleResult result() const { return result_; }

 private:
  OracleResult result_;
};

std::vector<double> probability_grid() {
  std::vector<double> p;
  for (int j = 1; j <= 50; ++j) p.push_back(0.005 * j);
  return p;
}

double quarter_bound(std::size_t m, double p) {
  const double md = static_cast<double>(m);
  return std::pow(4.0 / std::pow(3.0, 0.75), md) * std::pow(p, md / 4.0);
}

constexpr std::size_t kBaggedSizes[] = {5, 20, 100, 500};

}  // namespace

OracleResult binomial_majority_oracle() {
  Tally tally("binomial majority tail");
  for (std::size_t m = 1; m <= 20; ++m) {
    const double md = static_cast<double>(m);
    for (double p : probability_grid()) {
      const double tail = binomial_upper_tail(m, p, md / 2.0);
      const double middle = std::pow(2.0 * std::sqrt(p * (1.0 - p)), md);
      const double outer = std::pow(2.0, md) * std::pow(p, md / 2.0);
      tally.check(middle, tail);
      tally.check(outer, middle);
    }
  }
  return tally.result();
}

OracleResult binomial_quarter_oracle() {
  Tally tally("binomial quarter tail");
  std::vector<double> grid = probability_grid();
  const double cap = 27.0 / std::pow(4.0 * kE, 4.0);
  for (int j = 1; j <= 50; ++j) grid.push_back(cap * j / 50.0);
  for (std::size_t m = 1; m <= 20; ++m) {
    for (double p : grid) {
      tally.check(quarter_bound(m, p), binomial_upper_tail(m, p, static_cast<double>(m) / 4.0));
    }
  }
  return tally.result();
}

OracleResult level_identity_oracle() {
  Tally tally("level identities");
  const double p_half = 1.0 / (4.0 * kE * kE);
  const double p_quarter = 27.0 / std::pow(4.0 * kE, 4.0);
  for (std::size_t m = 1; m <= 50; ++m) {
    const double md = static_cast<double>(m);
    const double target = std::exp(-md);
    const double half = std::pow(2.0, md) * std::pow(p_half, md / 2.0);
    tally.check(1e-12, std::fabs(half - target) / target);
    tally.check(1e-12, std::fabs(quarter_bound(m, p_quarter) - target) / target);
  }
  return tally.result();
}

std::vector<std::size_t> oracle_k_grid(std::size_t n) {
  std::vector<std::size_t> ks;
  if (n <= 50) {
    for (std::size_t k = 1; k <= n; ++k) ks.push_back(k);
    return ks;
  }
  for (std::size_t j = 0; j < 50; ++j) {
    const double pos = 1.0 + static_cast<double>(j) * static_cast<double>(n - 1) / 49.0;
    ks.push_back(static_cast<std::size_t>(std::llround(pos)));
  }
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

OracleResult bagged_bias_oracle() {
  Tally tally("bagged 1-NN bias");
  for (std::size_t n : kBaggedSizes) {
    for (std::size_t k : oracle_k_grid(n)) {
      const WeightVector v = bagged_weights_with_replacement(k, n);
      for (std::size_t d = 1; d <= 6; ++d) {
        const double inv_d = 1.0 / static_cast<double>(d);
        std::vector<double> terms(n);
        for (std::size_t i = 0; i < n; ++i) {
          terms[i] = v[i] * std::pow(static_cast<double>(i + 1) / static_cast<double>(n + 1), inv_d);
        }
        tally.check(2.0 * kE * std::pow(static_cast<double>(k), -inv_d), compensated_sum(terms));
      }
    }
  }
  return tally.result();
}

OracleResult bagged_variance_oracle() {
  Tally tally("bagged 1-NN variance");
  for (std::size_t n : kBaggedSizes) {
    const double nd = static_cast<double>(n);
    for (std::size_t k : oracle_k_grid(n)) {
      const WeightVector v = bagged_weights_with_replacement(k, n);
      std::vector<double> squares(n);
      for (std::size_t i = 0; i < n; ++i) squares[i] = v[i] * v[i];
      const double kd = static_cast<double>(k);
      tally.check(2.0 * kd / nd * std::pow(1.0 + 1.0 / nd, 2.0 * kd), compensated_sum(squares));
    }
  }
  return tally.result();
}

double bump_square_integral(std::size_t dim, std::size_t grid) {
  auto midpoint = [dim](std::size_t g) {
    const double step = 1.0 / static_cast<double>(g);
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> x(dim);
    double total = 0.0;
    while (true) {
      for (std::size_t a = 0; a < dim; ++a) x[a] = -0.5 + (static_cast<double>(idx[a]) + 0.5) * step;
      const double g_val = lower_bound_g(x);
      total += g_val * g_val;
      std::size_t a = 0;
      while (a < dim && ++idx[a] == g) idx[a++] = 0;
      if (a == dim) break;
    }
    return total * std::pow(step, static_cast<double>(dim));
  };
  const double coarse = midpoint(grid);
  const double fine = midpoint(2 * grid);
  return (4.0 * fine - coarse) / 3.0;
}

OracleResult bump_quadrature_oracle(double tolerance) {
  Tally tally("bump square integral");
  constexpr std::size_t kGrid[] = {0, 1000, 200, 100};
  for (std::size_t d = 1; d <= 3; ++d) {
    const double dd = static_cast<double>(d);
    const double exact = 1.0 / (2.0 * (dd + 1.0) * (dd + 2.0));
    const double rel = std::fabs(bump_square_integral(d, kGrid[d]) - exact) / exact;
    tally.check(tolerance, rel);
  }
  return tally.result();
}

std::vector<OracleResult> run_all_oracles() {
  return {binomial_majority_oracle(), binomial_quarter_oracle(), level_identity_oracle(),
          bagged_bias_oracle(),       bagged_variance_oracle(),  bump_quadrature_oracle()};
}

}  // namespace momreg
