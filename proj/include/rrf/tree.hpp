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
#include "rrf/seed.hpp"

namespace rrf {

using ClassCounts = std::vector<std::size_t>;

/// Shannon entropy (base 2) of a class-count vector.
double entropy(std::span<const std::size_t> counts);

/// H(parent) - n_l/n H(left) - n_r/n H(right). Requires left + right ==
/// parent componentwise.
double info_gain(std::span<const std::size_t> parent,
                 std::span<const std::size_t> left,
                 std::span<const std::size_t> right);

/// info_gain / H(parent); in [0,1]. Throws PureParent when H(parent) == 0.
double info_gain_ratio(std::span<const std::size_t> parent,
                       std::span<const std::size_t> left,
                       std::span<const std::size_t> right);

class DecisionTree {
 public:
  static constexpr std::int32_t kLeaf = -1;

  // Flat node record. Internal nodes carry a split; leaves carry the
  // empirical class distribution. Every node keeps its class counts so the
  // split statistics can be recomputed from the tree alone.
  struct Node {
    std::int32_t feature = kLeaf;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double igr = 0.0;
    ClassCounts class_counts;
    std::vector<double> distribution;

    bool is_leaf() const { return feature == kLeaf; }
    std::size_t n_samples() const;

    bool operator==(const Node&) const = default;
  };

  DecisionTree() = default;
  DecisionTree(std::vector<Node> nodes, FeatureList feature_set,
               std::size_t n_features, std::size_t n_classes);

  /// Class distribution of the leaf reached by `row` (value <= threshold
  /// goes left).
  std::span<const double> predict_proba(std::span<const double> row) const;

  std::size_t n_internal_nodes() const { return n_internal_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return n_classes_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const FeatureList& feature_set_snapshot() const { return feature_set_; }

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<Node> nodes_;  // nodes_[0] is the root
  FeatureList feature_set_;
  std::size_t n_features_ = 0;
  std::size_t n_classes_ = 0;
  std::size_t n_internal_ = 0;
};

struct TreeParams {
  std::size_t features_per_node = 1;  // f
  std::size_t min_leaf = 1;
};

/// Grows an unpruned entropy tree on `rows` of `data` (repeats allowed, as
/// produced by bootstrap sampling). Each internal node draws exactly
/// `features_per_node` candidates from `available` without replacement and
/// picks the split with the largest information gain; ties go to the lower
/// feature index, then the lower threshold.
DecisionTree train_tree(const Dataset& data, std::span<const std::size_t> rows,
                        std::span<const FeatureIndex> available,
                        const TreeParams& params, Rng& rng);

/// Convenience overload that trains on every row of `sample`.
DecisionTree train_tree(const Dataset& sample,
                        std::span<const FeatureIndex> available,
                        const TreeParams& params, Rng& rng);

/// w(j) = (1/N) * sum of IGR over internal nodes splitting on j, where N is
/// the number of internal nodes. All zeros for a leaf-only tree.
std::vector<double> local_feature_weights(const DecisionTree& tree,
                                          std::size_t n_features);

}  // namespace rrf
