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

#include "momreg/mom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "momreg/errors.hpp"
#include "momreg/random.hpp"

namespace momreg {
namespace {

constexpr double kE = std::numbers::e;

double dim_of(const ModelClass& model) { return static_cast<double>(model.dim); }

double require_alpha(const ModelClass& model) {
  if (!model.alpha) throw std::invalid_argument("mutual NN requires the doubling constant alpha");
  return *model.alpha;
}

// Closed forms that land on an integer in exact arithmetic may come out a
// few ulps below it; values within 1e-12 (relative) are snapped before floor.
double snap_to_integer(double v) {
  const double nearest = std::round(v);
  return std::fabs(v - nearest) <= 1e-12 * std::max(1.0, std::fabs(v)) ? nearest : v;
}

std::size_t checked_floor(double value, std::size_t n, std::size_t m, const char* name) {
  const std::string label(name);
  value = snap_to_integer(value);
  if (!(value >= 1.0)) throw ConfigurationError(label + " >= 1", 1.0, value);
  const double cap = static_cast<double>(n / m);
  const double fl = std::floor(value);
  if (fl > cap) throw ConfigurationError(label + " <= floor(n/m)", fl, cap);
  return static_cast<std::size_t>(fl);
}

void check_blocks(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) {
    throw std::invalid_argument("block count " + std::to_string(m) + " outside [1, " +
                                std::to_string(n) + "]");
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::knn: return "knn";
    case Family::bagged: return "bagged";
    case Family::mnn: return "mnn";
    case Family::kernel: return "kernel";
    case Family::partition: return "partition";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "knn") return Family::knn;
  if (name == "bagged") return Family::bagged;
  if (name == "mnn") return Family::mnn;
  if (name == "kernel") return Family::kernel;
  if (name == "partition") return Family::partition;
  throw std::invalid_argument("unknown estimator family '" + name + "'");
}

void ModelClass::validate() const {
  if (dim < 1) throw std::invalid_argument("model: dimension must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("model: rho must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("model: sigma must be non-negative");
  }
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw std::invalid_argument("model: diameter must be positive");
  }
  const double cap = std::pow(diameter, -dim_of(*this));
  if (rho > cap * (1.0 + 1e-12)) throw ConfigurationError("rho <= D^-d", rho, cap);
  if (alpha && !(*alpha > 0.0 && *alpha <= 1.0)) {
    throw std::invalid_argument("model: alpha must lie in (0, 1]");
  }
}

std::vector<double> block_predictions(const Dataset& data, std::span<const double> x,
                                      const MoMConfig& config, std::uint64_t seed) {
  const BlockPartition part = split_blocks(data.size(), config.blocks);
  validate(config.base, part.block_size);
  std::vector<double> out(part.blocks);
  for (std::size_t j = 0; j < part.blocks; ++j) {
    const IndexRange& r = part.ranges[j];
    out[j] = base_predict(config.base, data.view(r.begin, r.size()), x, derive_seed(seed, j));
  }
  return out;
}

double mom_predict(const Dataset& data, std::span<const double> x, const MoMConfig& config,
                   std::uint64_t seed) {
  const std::vector<double> preds = block_predictions(data, x, config, seed);
  return median_of(preds);
}

std::size_t select_m(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("select_m: delta must lie in (0, 1)");
  }
  const double l = -std::log(delta);
  const double nearest = std::round(l);
  if (nearest >= 1.0 && std::fabs(l - nearest) <= 1e-12 * std::max(1.0, l)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::max(1.0, std::ceil(l)));
}

double validity_constant(Family family, const ModelClass& model) {
  model.validate();
  const double d = dim_of(model);
  const double s = model.sigma;
  const double rho = model.rho;
  switch (family) {
    case Family::knn:
    case Family::bagged:
      return std::min({rho * std::pow(s / (4.0 * kE * std::sqrt(2.0)), d),
                       32.0 * kE * kE / (s * s * std::pow(rho, 2.0 / d)), 1.0});
    case Family::mnn: {
      const double a = require_alpha(model);
      return std::min({rho * std::pow(s * a / (4.0 * kE), d),
                       16.0 * kE * kE / (a * s * s * std::pow(rho, 2.0 / d)), 1.0});
    }
    case Family::kernel:
      return std::min(rho * std::pow(model.diameter, d + 2.0) / (8.0 * kE * kE * s * s), 1.0);
    case Family::partition:
      return std::min(rho * d / (std::pow(2.0, d + 3.0) * kE * kE * s * s), 1.0);
  }
  throw std::invalid_argument("validity_constant: unknown family");
}

DeltaInterval admissible_delta(Family family, const ModelClass& model, std::size_t n) {
  if (n < 1) throw std::invalid_argument("admissible_delta: n must be positive");
  const double c = validity_constant(family, model);
  DeltaInterval out;
  out.lower = std::exp(-c * static_cast<double>(n) + 1.0);
  out.upper = 1.0;
  out.empty = out.lower >= 1.0;
  return out;
}

std::size_t select_k_star_knn(const ModelClass& model, std::size_t n, std::size_t m) {
  model.validate();
  check_blocks(n, m);
  const double d = dim_of(model);
  const double v = std::pow(model.sigma * model.sigma / (32.0 * kE * kE), d / (d + 2.0)) *
                   std::pow(model.rho * static_cast<double>(n) / static_cast<double>(m),
                            2.0 / (d + 2.0));
  return checked_floor(v, n, m, "k_star");
}

std::size_t select_k_star_bagged(const ModelClass& model, std::size_t n, std::size_t m) {
  model.validate();
  check_blocks(n, m);
  const double d = dim_of(model);
  const double s2 = model.sigma * model.sigma;
  const double v = std::pow(32.0 * kE * kE * static_cast<double>(n) /
                                (std::pow(model.rho, 2.0 / d) * s2 * static_cast<double>(m)),
                            d / (d + 2.0));
  return checked_floor(v, n, m, "k_star");
}

std::size_t select_k_star_mnn(const ModelClass& model, std::size_t n, std::size_t m) {
  model.validate();
  check_blocks(n, m);
  const double a = require_alpha(model);
  const double d = dim_of(model);
  const double v =
      std::pow(a * model.sigma * model.sigma / (16.0 * kE * kE), d / (d + 2.0)) *
      std::pow(model.rho * static_cast<double>(n) / static_cast<double>(m), 2.0 / (d + 2.0));
  return checked_floor(v, n, m, "k_star");
}

double select_h_star(const ModelClass& model, std::size_t n, std::size_t m) {
  model.validate();
  check_blocks(n, m);
  const double d = dim_of(model);
  const double h = std::pow(8.0 * kE * kE * model.sigma * model.sigma * static_cast<double>(m) /
                                (model.rho * static_cast<double>(n)),
                            1.0 / (d + 2.0));
  if (!(h > 0.0)) throw ConfigurationError("h_star > 0", 0.0, h);
  if (h > model.diameter) throw ConfigurationError("h_star <= D", h, model.diameter);
  return h;
}

std::size_t select_K_star(const ModelClass& model, std::size_t n, std::size_t m) {
  model.validate();
  check_blocks(n, m);
  const double d = dim_of(model);
  double v =
      std::pow(model.rho * d * static_cast<double>(n) /
                   (std::pow(2.0, d + 3.0) * kE * kE * model.sigma * model.sigma *
                    static_cast<double>(m)),
               1.0 / (d + 2.0));
  v = snap_to_integer(v);
  if (!(v >= 1.0)) throw ConfigurationError("K_star >= 1", 1.0, v);
  if (!std::isfinite(v)) throw ConfigurationError("K_star finite", v, 0.0);
  return static_cast<std::size_t>(std::floor(v));
}

BaseEstimatorKind select_base(Family family, const ModelClass& model, std::size_t n,
                              std::size_t m) {
  switch (family) {
    case Family::knn: return estimator::KNN{select_k_star_knn(model, n, m)};
    case Family::bagged: return estimator::BaggedOneNN{select_k_star_bagged(model, n, m), true};
    case Family::mnn: return estimator::MutualNN{select_k_star_mnn(model, n, m)};
    case Family::kernel: return estimator::Kernel{select_h_star(model, n, m)};
    case Family::partition: return estimator::Partition{select_K_star(model, n, m)};
  }
  throw std::invalid_argument("select_base: unknown family");
}

double radius_constant(Family family, const ModelClass& model) {
  switch (family) {
    case Family::knn: return 32.0 * kE * kE * std::sqrt(2.0);
    case Family::bagged: return 128.0 * kE * kE * kE;
    case Family::mnn: return 64.0 * kE * kE * std::cbrt(require_alpha(model));
    case Family::kernel: return 4.0 * std::pow(kE, 2.0 / 3.0);
    case Family::partition: return 16.0 * kE * std::sqrt(dim_of(model));
  }
  throw std::invalid_argument("radius_constant: unknown family");
}

double robust_inflation() { return 64.0 * kE * kE / 27.0; }

double radius_for_blocks(Family family, const ModelClass& model, std::size_t n, std::size_t m,
                         bool robust) {
  model.validate();
  if (n < 1) throw std::invalid_argument("radius: n must be positive");
  const double d = dim_of(model);
  double a = radius_constant(family, model);
  if (robust) a *= robust_inflation();
  return a * std::pow(model.sigma * model.sigma * static_cast<double>(m) /
                          (model.rho * static_cast<double>(n)),
                      1.0 / (d + 2.0));
}

ConfidenceRadius bound_radius(Family family, const ModelClass& model, std::size_t n,
                              double delta, bool robust) {
  const DeltaInterval range = admissible_delta(family, model, n);
  if (!range.contains(delta)) {
    throw ConfigurationError("delta in [e^{-cn+1}, 1)", range.lower, delta);
  }
  ConfidenceRadius out;
  out.family = family;
  out.delta = delta;
  out.blocks = select_m(delta);
  out.robust = robust;
  out.constant_a = radius_constant(family, model) * (robust ? robust_inflation() : 1.0);
  out.radius = radius_for_blocks(family, model, n, out.blocks, robust);
  return out;
}

double sup_error_partition(const Dataset& data, std::size_t m, std::size_t cells_per_axis,
                           std::uint64_t /*seed*/, const RegressionFunction& truth,
                           std::size_t grid_per_axis, std::size_t cell_cap) {
  if (cells_per_axis < 1) throw std::invalid_argument("sup_error_partition: K must be >= 1");
  if (grid_per_axis < 1) throw std::invalid_argument("sup_error_partition: grid must be >= 1");
  const std::size_t d = data.dim();
  double total = 1.0;
  for (std::size_t a = 0; a < d; ++a) total *= static_cast<double>(cells_per_axis);
  if (total > static_cast<double>(cell_cap)) {
    throw ResourceError("sup_error_partition: " + std::to_string(total) +
                        " cells exceed the cap of " + std::to_string(cell_cap));
  }
  const auto cells = static_cast<std::size_t>(total);
  const BlockPartition part = split_blocks(data.size(), m);

  // Per-block cell means; partitioning has no distance ties so the seed is
  // not consumed.
  std::vector<double> means(part.blocks * cells, 0.0);
  std::vector<std::size_t> counts(cells);
  for (std::size_t j = 0; j < part.blocks; ++j) {
    std::fill(counts.begin(), counts.end(), 0);
    double* row = means.data() + j * cells;
    for (std::size_t i = part.ranges[j].begin; i < part.ranges[j].end; ++i) {
      const std::size_t c = partition_cell(data.point(i), cells_per_axis);
      row[c] += data.response(i);
      ++counts[c];
    }
    for (std::size_t c = 0; c < cells; ++c) {
      if (counts[c] > 0) row[c] /= static_cast<double>(counts[c]);
    }
  }

  double grid_total = 1.0;
  for (std::size_t a = 0; a < d; ++a) grid_total *= static_cast<double>(grid_per_axis);
  const auto grid_points = static_cast<std::size_t>(grid_total);
  const double side = 1.0 / static_cast<double>(cells_per_axis);
  const double step = side / static_cast<double>(grid_per_axis);

  double worst = 0.0;
  std::vector<double> column(part.blocks);
  std::vector<std::size_t> cell_idx(d);
  Point x(d);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t j = 0; j < part.blocks; ++j) column[j] = means[j * cells + c];
    const double prediction = median_of(column);

    std::size_t rem = c;
    for (std::size_t a = d; a-- > 0;) {
      cell_idx[a] = rem % cells_per_axis;
      rem /= cells_per_axis;
    }
    for (std::size_t g = 0; g < grid_points; ++g) {
      std::size_t grem = g;
      for (std::size_t a = d; a-- > 0;) {
        const std::size_t t = grem % grid_per_axis;
        grem /= grid_per_axis;
        x[a] = static_cast<double>(cell_idx[a]) * side + (static_cast<double>(t) + 0.5) * step;
      }
      worst = std::max(worst, std::fabs(prediction - truth(x)));
    }
  }
  return worst;
}

}  // namespace momreg
