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

#include "rrf/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "rrf/error.hpp"

namespace rrf {

namespace {

// Gains at or below this are treated as "no improvement".
constexpr double kMinGain = 1e-12;

std::size_t total(std::span<const std::size_t> counts) {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

}  // namespace

double entropy(std::span<const std::size_t> counts) {
  const std::size_t n = total(counts);
  if (n == 0) fail(ErrorKind::kAllZeroCounts, "entropy of an empty node");
  const double inv = 1.0 / static_cast<double>(n);
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) * inv;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double info_gain(std::span<const std::size_t> parent,
                 std::span<const std::size_t> left,
                 std::span<const std::size_t> right) {
  if (left.size() != parent.size() || right.size() != parent.size()) {
    fail(ErrorKind::kInconsistentCounts, "class vectors differ in length");
  }
  for (std::size_t k = 0; k < parent.size(); ++k) {
    if (left[k] + right[k] != parent[k]) {
      fail(ErrorKind::kInconsistentCounts,
           "left + right != parent for class " + std::to_string(k));
    }
  }
  const std::size_t n = total(parent);
  if (n == 0) fail(ErrorKind::kAllZeroCounts, "empty parent");
  const std::size_t nl = total(left);
  const std::size_t nr = total(right);
  double gain = entropy(parent);
  if (nl > 0) gain -= static_cast<double>(nl) / static_cast<double>(n) * entropy(left);
  if (nr > 0) gain -= static_cast<double>(nr) / static_cast<double>(n) * entropy(right);
  return gain;
}

double info_gain_ratio(std::span<const std::size_t> parent,
                       std::span<const std::size_t> left,
                       std::span<const std::size_t> right) {
  const double h = entropy(parent);
  if (h <= 0.0) fail(ErrorKind::kPureParent, "gain ratio of a pure node");
  const double ratio = info_gain(parent, left, right) / h;
  return std::clamp(ratio, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

std::size_t DecisionTree::Node::n_samples() const { return total(class_counts); }

DecisionTree::DecisionTree(std::vector<Node> nodes, FeatureList feature_set,
                           std::size_t n_features, std::size_t n_classes)
    : nodes_(std::move(nodes)),
      feature_set_(std::move(feature_set)),
      n_features_(n_features),
      n_classes_(n_classes) {
  // Count only nodes reachable from the root.
  std::vector<std::int32_t> stack;
  if (!nodes_.empty()) stack.push_back(0);
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (node.is_leaf()) continue;
    ++n_internal_;
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
}

std::span<const double> DecisionTree::predict_proba(
    std::span<const double> row) const {
  if (row.size() != n_features_) {
    fail(ErrorKind::kDimensionMismatch,
         "row has " + std::to_string(row.size()) + " values, tree expects " +
             std::to_string(n_features_));
  }
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const Node& node = nodes_[i];
    i = static_cast<std::size_t>(
        row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                      : node.right);
  }
  return nodes_[i].distribution;
}

// ---------------------------------------------------------------------------

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::span<const FeatureIndex> available,
              const TreeParams& params, Rng& rng)
      : data_(data),
        available_(available.begin(), available.end()),
        params_(params),
        rng_(rng),
        n_classes_(data.n_classes()) {}

  DecisionTree build(std::span<const std::size_t> rows) {
    idx_.assign(rows.begin(), rows.end());
    xlogx_.resize(idx_.size() + 1);
    xlogx_[0] = 0.0;
    for (std::size_t c = 1; c < xlogx_.size(); ++c) {
      const double x = static_cast<double>(c);
      xlogx_[c] = x * std::log2(x);
    }

    nodes_.clear();
    nodes_.emplace_back();
    struct Work {
      std::size_t node, begin, end;
    };
    std::vector<Work> stack{{0, 0, idx_.size()}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      ClassCounts counts = count(w.begin, w.end);
      nodes_[w.node].class_counts = counts;

      const std::size_t n = w.end - w.begin;
      const auto nonzero = std::count_if(counts.begin(), counts.end(),
                                         [](std::size_t c) { return c > 0; });
      Split split;
      if (nonzero <= 1 || n < 2 * params_.min_leaf ||
          !find_split(w.begin, w.end, counts, split)) {
        make_leaf(w.node);
        continue;
      }

      ClassCounts right(n_classes_);
      for (std::size_t k = 0; k < n_classes_; ++k) {
        right[k] = counts[k] - split.left_counts[k];
      }
      const auto mid = std::partition(
          idx_.begin() + static_cast<std::ptrdiff_t>(w.begin),
          idx_.begin() + static_cast<std::ptrdiff_t>(w.end),
          [&](std::size_t r) { return data_.at(r, split.feature) <= split.threshold; });
      const auto split_at = static_cast<std::size_t>(mid - idx_.begin());

      const auto left_id = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
      nodes_.emplace_back();
      DecisionTree::Node& node = nodes_[w.node];
      node.feature = static_cast<std::int32_t>(split.feature);
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = left_id + 1;
      node.igr = info_gain_ratio(counts, split.left_counts, right);

      stack.push_back({static_cast<std::size_t>(left_id) + 1, split_at, w.end});
      stack.push_back({static_cast<std::size_t>(left_id), w.begin, split_at});
    }
    FeatureList snapshot = available_;
    return DecisionTree(std::move(nodes_), std::move(snapshot), data_.n_features(),
                        n_classes_);
  }

 private:
  struct Split {
    FeatureIndex feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
    ClassCounts left_counts;
  };

  ClassCounts count(std::size_t begin, std::size_t end) const {
    ClassCounts counts(n_classes_, 0);
    for (std::size_t i = begin; i < end; ++i) ++counts[data_.label(idx_[i])];
    return counts;
  }

  // sum_k c_k log2 c_k
  double sum_xlogx(const ClassCounts& counts) const {
    double s = 0.0;
    for (std::size_t c : counts) s += xlogx_[c];
    return s;
  }

  void make_leaf(std::size_t id) {
    DecisionTree::Node& node = nodes_[id];
    const double n = static_cast<double>(node.n_samples());
    node.distribution.resize(n_classes_);
    for (std::size_t k = 0; k < n_classes_; ++k) {
      node.distribution[k] = static_cast<double>(node.class_counts[k]) / n;
    }
  }

  void draw_candidates() {
    candidates_ = available_;
    const std::size_t f = params_.features_per_node;
    for (std::size_t i = 0; i < f; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, candidates_.size() - 1);
      std::swap(candidates_[i], candidates_[pick(rng_)]);
    }
    candidates_.resize(f);
  }

  bool find_split(std::size_t begin, std::size_t end, const ClassCounts& parent,
                  Split& best) {
    draw_candidates();
    const std::size_t n = end - begin;
    const double nd = static_cast<double>(n);
    const double parent_h = std::log2(nd) - sum_xlogx(parent) / nd;
    const std::size_t min_leaf = params_.min_leaf;

    bool found = false;
    ClassCounts left(n_classes_);
    ClassCounts right(n_classes_);
    for (FeatureIndex feature : candidates_) {
      pairs_.clear();
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t r = idx_[i];
        pairs_.emplace_back(data_.at(r, feature), data_.label(r));
      }
      std::sort(pairs_.begin(), pairs_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (pairs_.front().first == pairs_.back().first) continue;

      std::fill(left.begin(), left.end(), 0);
      right = parent;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const Label y = pairs_[i].second;
        ++left[y];
        --right[y];
        const double lo = pairs_[i].first;
        const double hi = pairs_[i + 1].first;
        if (lo == hi) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double impurity = xlogx_[nl] - sum_xlogx(left) + xlogx_[nr] -
                                sum_xlogx(right);
        const double gain = parent_h - impurity / nd;
        if (gain <= kMinGain) continue;
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        const bool better =
            !found || gain > best.gain ||
            (gain == best.gain &&
             (feature < best.feature ||
              (feature == best.feature && threshold < best.threshold)));
        if (better) {
          found = true;
          best.feature = feature;
          best.threshold = threshold;
          best.gain = gain;
          best.left_counts = left;
        }
      }
    }
    return found;
  }

  const Dataset& data_;
  FeatureList available_;
  TreeParams params_;
  Rng& rng_;
  std::size_t n_classes_;

  std::vector<std::size_t> idx_;
  std::vector<double> xlogx_;
  std::vector<DecisionTree::Node> nodes_;
  FeatureList candidates_;
  std::vector<std::pair<double, Label>> pairs_;
};

}  // namespace

DecisionTree train_tree(const Dataset& data, std::span<const std::size_t> rows,
                        std::span<const FeatureIndex> available,
                        const TreeParams& params, Rng& rng) {
  if (rows.empty()) fail(ErrorKind::kEmptySample, "no training rows");
  if (params.features_per_node == 0) {
    fail(ErrorKind::kFNotPositive, "features_per_node must be >= 1");
  }
  if (params.features_per_node > available.size()) {
    fail(ErrorKind::kFNotPositive,
         "features_per_node " + std::to_string(params.features_per_node) +
             " exceeds " + std::to_string(available.size()) +
             " available features");
  }
  if (params.min_leaf == 0) {
    fail(ErrorKind::kInvalidConfig, "min_leaf must be >= 1");
  }
  for (FeatureIndex j : available) {
    if (j >= data.n_features()) {
      fail(ErrorKind::kDimensionMismatch,
           "feature index " + std::to_string(j) + " out of range");
    }
  }
  TreeBuilder builder(data, available, params, rng);
  return builder.build(rows);
}

DecisionTree train_tree(const Dataset& sample,
                        std::span<const FeatureIndex> available,
                        const TreeParams& params, Rng& rng) {
  std::vector<std::size_t> rows(sample.n_samples());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return train_tree(sample, rows, available, params, rng);
}

std::vector<double> local_feature_weights(const DecisionTree& tree,
                                          std::size_t n_features) {
  std::vector<double> w(n_features, 0.0);
  const std::size_t n_internal = tree.n_internal_nodes();
  if (n_internal == 0) return w;
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) continue;
    const auto j = static_cast<std::size_t>(node.feature);
    if (j < n_features) w[j] += node.igr;
  }
  for (double& v : w) v /= static_cast<double>(n_internal);
  return w;
}

}  // namespace rrf
