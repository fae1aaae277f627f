/*
 * Copyright 2026 The RRF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/forest.hpp"
#include "rrf/growth.hpp"

namespace rrf {

// Feature sets are kept as ascending index vectors.
struct FeaturePools {
  FeatureList active;     // F
  FeatureList important;  // I
  FeatureList unimportant;  // U
  FeatureList removed;

  bool operator==(const FeaturePools&) const = default;
};

/// I = the floor(sqrt(|F0|)) highest-weight features (ties: lower index),
/// U = the rest.
FeaturePools initial_pools(std::span<const double> weights,
                           std::span<const FeatureIndex> initial_features);

/// Features of `pool` whose weight is below mean - 2 * population stddev;
/// when none qualify, every feature attaining the minimum weight.
FeatureList prune_set(std::span<const FeatureIndex> pool,
                      std::span<const double> weights);

/// Features of `unimportant` weighing at least the minimum over `important`.
FeatureList promote_set(std::span<const FeatureIndex> unimportant,
                        std::span<const FeatureIndex> important,
                        std::span<const double> weights);

struct PoolUpdate {
  FeaturePools pools;
  std::int64_t delta_u = 0;
  std::int64_t delta_v = 0;
};

/// F' = F \ R, I' = I + A, U' = U \ (R + A).
PoolUpdate update_pools(const FeaturePools& pools, std::span<const FeatureIndex> pruned,
                        std::span<const FeatureIndex> promoted);

struct RefineConfig {
  std::size_t initial_trees = 20;  // T0
  std::size_t features_per_node = 0;  // 0 = floor(sqrt(n_features))
  std::size_t min_leaf = 1;
  std::size_t max_iterations = 100;
  std::size_t delta_b_cap = kDefaultDeltaBCap;
  std::uint64_t seed = 0;
  std::size_t n_threads = 0;

  void validate() const;
};

struct IterationTrace {
  std::size_t iteration = 0;
  FeaturePools before;
  FeaturePools after;
  FeatureList pruned;    // R
  FeatureList promoted;  // A
  GrowthEvaluation growth;
  std::size_t n_trees = 0;  // trees in the forest grown this iteration
  double valid_accuracy = 0.0;
};

struct RefineResult {
  Forest forest;
  std::vector<IterationTrace> trace;
  FeaturePools pools;
  std::vector<double> weights;  // global weights of `forest`
  std::size_t features_per_node = 0;
  double initial_valid_accuracy = 0.0;
};

RefineResult refine(const Dataset& train, const Dataset& valid,
                    const RefineConfig& config);

/// One CSV row per iteration with header
/// n,n_features,n_important,n_unimportant,n_pruned,n_promoted,delta_b,valid_accuracy
/// (pool sizes after the update).
void write_trace_csv(std::ostream& out, std::span<const IterationTrace> trace);

}  // namespace rrf
