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

#include "momreg/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "momreg/random.hpp"

namespace momreg {

BlockView::BlockView(std::span<const double> features, std::span<const double> responses,
                     std::size_t dim)
    : features_(features), responses_(responses), dim_(dim) {
  if (dim == 0) throw std::invalid_argument("BlockView: dimension must be positive");
  if (features.size() != responses.size() * dim) {
    throw std::invalid_argument("BlockView: feature/response length mismatch");
  }
}

Dataset::Dataset(std::size_t dim, std::vector<double> features, std::vector<double> responses)
    : dim_(dim), features_(std::move(features)), responses_(std::move(responses)) {
  if (dim_ == 0) throw std::invalid_argument("Dataset: dimension must be positive");
  if (responses_.empty()) throw std::invalid_argument("Dataset: at least one sample required");
  if (features_.size() != responses_.size() * dim_) {
    throw std::invalid_argument("Dataset: expected " + std::to_string(responses_.size() * dim_) +
                                " feature values, got " + std::to_string(features_.size()));
  }
  for (double v : features_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite feature value");
  }
  for (double v : responses_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite response value");
  }
}

Dataset Dataset::from_samples(std::span<const Sample> samples) {
  if (samples.empty()) throw std::invalid_argument("Dataset: at least one sample required");
  const std::size_t dim = samples.front().x.size();
  std::vector<double> features;
  std::vector<double> responses;
  features.reserve(samples.size() * dim);
  responses.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.x.size() != dim) throw std::invalid_argument("Dataset: inconsistent point dimension");
    features.insert(features.end(), s.x.begin(), s.x.end());
    responses.push_back(s.y);
  }
  return Dataset(dim, std::move(features), std::move(responses));
}

Sample Dataset::sample(std::size_t i) const {
  auto p = point(i);
  return Sample{Point(p.begin(), p.end()), responses_[i]};
}

BlockView Dataset::view(std::size_t begin, std::size_t count) const {
  if (begin + count > size()) throw std::out_of_range("Dataset::view: range past end");
  return BlockView(std::span<const double>(features_).subspan(begin * dim_, count * dim_),
                   std::span<const double>(responses_).subspan(begin, count), dim_);
}

std::vector<std::size_t> BlockPartition::indices(std::size_t j) const {
  const IndexRange& r = ranges.at(j);
  std::vector<std::size_t> out(r.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r.begin + i;
  return out;
}

double median_of(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median_of: empty input");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t rank = (v.size() + 1) / 2;  // ceil(m/2), 1-based
  auto nth = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

BlockPartition split_blocks(std::size_t n, std::size_t m) {
  if (m == 0) throw std::invalid_argument("split_blocks: block count must be positive");
  if (m > n) {
    throw std::invalid_argument("split_blocks: block count " + std::to_string(m) +
                                " exceeds sample count " + std::to_string(n));
  }
  BlockPartition p;
  p.blocks = m;
  p.block_size = n / m;
  p.ranges.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    p.ranges.push_back({j * p.block_size, (j + 1) * p.block_size});
  }
  return p;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return std::sqrt(s);
}

double tie_uniform(std::uint64_t tie_seed, std::size_t index) noexcept {
  return counter_uniform(tie_seed, index);
}

DistanceOrder order_by_distance(const BlockView& block, std::span<const double> x,
                                std::uint64_t tie_seed, std::size_t limit) {
  if (x.size() != block.dim()) {
    throw std::invalid_argument("order_by_distance: query has dimension " +
                                std::to_string(x.size()) + ", block has " +
                                std::to_string(block.dim()));
  }
  struct Key {
    double dist;
    double u;
    std::size_t idx;
  };
  const std::size_t n = block.size();
  std::vector<Key> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = {euclidean_distance(block.point(i), x), tie_uniform(tie_seed, i), i};
  }
  auto less = [](const Key& a, const Key& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.u != b.u) return a.u < b.u;
    return a.idx < b.idx;
  };
  const std::size_t take = std::min(limit, n);
  if (take < n) {
    std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(take), keys.end(),
                     less);
    keys.resize(take);
  }
  std::sort(keys.begin(), keys.end(), less);

  DistanceOrder out;
  out.tie_seed = tie_seed;
  out.permutation.reserve(take);
  out.distances.reserve(take);
  for (const Key& k : keys) {
    out.permutation.push_back(k.idx);
    out.distances.push_back(k.dist);
  }
  return out;
}

}  // namespace momreg
