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
#include <span>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/tree.hpp"

namespace rrf {

/// Floor applied to out-of-bag error so perfect trees keep a finite weight.
inline constexpr double kOobErrorFloor = 1e-6;

struct Forest {
  std::vector<DecisionTree> trees;
  // Per tree: how many times each training row was drawn. Zero marks an
  // out-of-bag row.
  std::vector<std::vector<std::uint32_t>> bootstrap_counts;
  std::vector<double> oob_errors;    // delta, floored
  std::vector<double> tree_weights;  // gamma, max == 1
  FeatureList feature_set;

  std::size_t size() const { return trees.size(); }
  std::vector<unsigned char> oob_mask(std::size_t tree) const;

  // Forest restricted to `keep` (in the given order) with tree weights
  // renormalised.
  Forest subset(std::span<const std::size_t> keep) const;

  bool operator==(const Forest&) const = default;
};

struct ForestParams {
  std::size_t n_trees = 1;
  TreeParams tree;
  std::uint64_t seed = 0;
  // 0 = hardware concurrency. The result does not depend on this value.
  std::size_t n_threads = 0;
};

/// Bagged forest over `feature_set`. Tree t draws n rows with replacement
/// using a generator seeded from (seed, t) and reuses it for node sampling.
Forest train_forest(const Dataset& train, std::span<const FeatureIndex> feature_set,
                    const ForestParams& params);

/// Misclassification rate (argmax) over rows with oob_mask != 0, floored at
/// `floor`. An empty OOB set yields `floor` and logs a warning.
double oob_error(const DecisionTree& tree, const Dataset& train,
                 std::span<const unsigned char> oob_mask,
                 double floor = kOobErrorFloor);

/// gamma_t = (1/delta_t) / max_s (1/delta_s).
std::vector<double> tree_normalized_weights(std::span<const double> oob_errors);

struct GlobalWeights {
  std::vector<double> weights;
  bool degenerate = false;  // no tree has a split; weights are all zero
};

/// S(j) = sum_t w_t(j) * gamma_t, normalised by max_j S(j).
GlobalWeights global_feature_weights(const Forest& forest, std::size_t n_features);

/// Unweighted mean of per-tree class distributions.
std::vector<double> forest_predict_proba(const Forest& forest,
                                         std::span<const double> row);

/// Row-major n x n_classes matrix of forest_predict_proba over `data`.
std::vector<double> forest_predict_proba(const Forest& forest, const Dataset& data);

/// Mean internal-node count over the forest's trees.
double mean_internal_nodes(const Forest& forest);

}  // namespace rrf
