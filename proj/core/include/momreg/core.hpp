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
#include <vector>

namespace momreg {

/// A feature vector in R^d.
using Point = std::vector<double>;

struct Sample {
  Point x;
  double y = 0.0;
};

/// Non-owning view over a contiguous run of samples of a Dataset. Blocks of
/// the median-of-means split are always contiguous, so this is also the block
/// type used by every base estimator.
class BlockView {
 public:
  BlockView(std::span<const double> features, std::span<const double> responses,
            std::size_t dim);

  std::size_t size() const noexcept { return responses_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return responses_.empty(); }

  std::span<const double> point(std::size_t i) const noexcept {
    return features_.subspan(i * dim_, dim_);
  }
  double response(std::size_t i) const noexcept { return responses_[i]; }
  std::span<const double> responses() const noexcept { return responses_; }

 private:
  std::span<const double> features_;
  std::span<const double> responses_;
  std::size_t dim_;
};

/// Immutable ordered list of (x, y) samples sharing dimension d. Features are
/// stored row-major.
class Dataset {
 public:
  Dataset(std::size_t dim, std::vector<double> features, std::vector<double> responses);

  static Dataset from_samples(std::span<const Sample> samples);

  std::size_t size() const noexcept { return responses_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return std::span<const double>(features_).subspan(i * dim_, dim_);
  }
  double response(std::size_t i) const noexcept { return responses_[i]; }
  Sample sample(std::size_t i) const;

  std::span<const double> features() const noexcept { return features_; }
  std::span<const double> responses() const noexcept { return responses_; }

  BlockView view() const { return view(0, size()); }
  BlockView view(std::size_t begin, std::size_t count) const;

 private:
  std::size_t dim_;
  std::vector<double> features_;
  std::vector<double> responses_;
};

/// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
};

/// m disjoint blocks of N = floor(n/m) consecutive indices; the trailing
/// n - mN indices are discarded.
struct BlockPartition {
  std::size_t blocks = 0;
  std::size_t block_size = 0;
  std::vector<IndexRange> ranges;

  std::vector<std::size_t> indices(std::size_t j) const;
  std::size_t used() const noexcept { return blocks * block_size; }
};

/// Block indices sorted by distance to a query. `distances[r]` is the
/// distance of `permutation[r]`. May hold only a prefix when a limit was
/// requested.
struct DistanceOrder {
  std::vector<std::size_t> permutation;
  std::vector<double> distances;
  std::uint64_t tie_seed = 0;
};

/// r_(ceil(m/2)): the smallest input value that has at least m/2 inputs at
/// or below it and at least m/2 at or above it.
double median_of(std::span<const double> values);

BlockPartition split_blocks(std::size_t n, std::size_t m);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Auxiliary tie-break uniform of block point `index` under `tie_seed`.
double tie_uniform(std::uint64_t tie_seed, std::size_t index) noexcept;

/// Sorts block points by Euclidean distance to `x`. Exact ties are broken by
/// i.i.d. uniforms drawn from `tie_seed`. With `limit` < block size only the
/// `limit` nearest points are returned (in order).
DistanceOrder order_by_distance(const BlockView& block, std::span<const double> x,
                                std::uint64_t tie_seed,
                                std::size_t limit = static_cast<std::size_t>(-1));

}  // namespace momreg
