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

#include "rrf/forest.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

#include "rrf/error.hpp"
#include "rrf/kernels.hpp"
#include "rrf/metrics.hpp"
#include "rrf/seed.hpp"

namespace rrf {

std::vector<unsigned char> Forest::oob_mask(std::size_t tree) const {
  const auto& counts = bootstrap_counts.at(tree);
  std::vector<unsigned char> mask(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) mask[i] = counts[i] == 0;
  return mask;
}

Forest Forest::subset(std::span<const std::size_t> keep) const {
  Forest out;
  out.feature_set = feature_set;
  for (std::size_t t : keep) {
    out.trees.push_back(trees.at(t));
    out.bootstrap_counts.push_back(bootstrap_counts.at(t));
    out.oob_errors.push_back(oob_errors.at(t));
  }
  out.tree_weights = tree_normalized_weights(out.oob_errors);
  return out;
}

double oob_error(const DecisionTree& tree, const Dataset& train,
                 std::span<const unsigned char> oob_mask, double floor) {
  if (oob_mask.size() != train.n_samples()) {
    fail(ErrorKind::kDimensionMismatch, "OOB mask length != training rows");
  }
  std::size_t total = 0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < oob_mask.size(); ++i) {
    if (!oob_mask[i]) continue;
    ++total;
    if (argmax(tree.predict_proba(train.row(i))) != train.label(i)) ++wrong;
  }
  if (total == 0) {
    std::clog << "warning: tree has an empty out-of-bag set; using error floor\n";
    return floor;
  }
  const double err = static_cast<double>(wrong) / static_cast<double>(total);
  return std::max(err, floor);
}

std::vector<double> tree_normalized_weights(std::span<const double> oob_errors) {
  std::vector<double> gamma(oob_errors.size());
  double best = 0.0;
  for (std::size_t t = 0; t < oob_errors.size(); ++t) {
    if (!(oob_errors[t] > 0.0)) {
      fail(ErrorKind::kInvariantViolation, "OOB error must be positive");
    }
    gamma[t] = 1.0 / oob_errors[t];
    best = std::max(best, gamma[t]);
  }
  for (double& g : gamma) g /= best;
  return gamma;
}

Forest train_forest(const Dataset& train, std::span<const FeatureIndex> feature_set,
                    const ForestParams& params) {
  if (params.n_trees == 0) fail(ErrorKind::kInvalidConfig, "forest needs >= 1 tree");
  if (train.n_samples() == 0) fail(ErrorKind::kEmptySample, "empty training set");

  const std::size_t n = train.n_samples();
  const std::size_t n_trees = params.n_trees;
  Forest forest;
  forest.feature_set.assign(feature_set.begin(), feature_set.end());
  forest.trees.resize(n_trees);
  forest.bootstrap_counts.resize(n_trees);
  forest.oob_errors.resize(n_trees);

  auto grow = [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t));
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    std::vector<std::uint32_t> counts(n, 0);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) {
      r = draw(rng);
      ++counts[r];
    }
    forest.trees[t] = train_tree(train, rows, feature_set, params.tree, rng);
    std::vector<unsigned char> mask(n);
    for (std::size_t i = 0; i < n; ++i) mask[i] = counts[i] == 0;
    forest.oob_errors[t] = oob_error(forest.trees[t], train, mask);
    forest.bootstrap_counts[t] = std::move(counts);
  };

  std::size_t threads = params.n_threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n_trees);
  if (threads <= 1) {
    for (std::size_t t = 0; t < n_trees; ++t) grow(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
          for (std::size_t t = next++; t < n_trees; t = next++) {
            try {
              grow(t);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
            }
          }
        });
      }
    }
    if (error) std::rethrow_exception(error);
  }

  forest.tree_weights = tree_normalized_weights(forest.oob_errors);
  return forest;
}

GlobalWeights global_feature_weights(const Forest& forest, std::size_t n_features) {
  if (forest.size() == 0) fail(ErrorKind::kInvalidConfig, "empty forest");
  std::vector<double> score(n_features, 0.0);
  for (std::size_t t = 0; t < forest.size(); ++t) {
    const auto local = local_feature_weights(forest.trees[t], n_features);
    const double gamma = forest.tree_weights[t];
    for (std::size_t j = 0; j < n_features; ++j) score[j] += local[j] * gamma;
  }
  GlobalWeights out;
  const double top = n_features ? *std::max_element(score.begin(), score.end()) : 0.0;
  if (!(top > 0.0)) {
    out.weights.assign(n_features, 0.0);
    out.degenerate = true;
    return out;
  }
  out.weights.resize(n_features);
  for (std::size_t j = 0; j < n_features; ++j) {
    out.weights[j] = score[j] / top;
  }
  return out;
}

std::vector<double> forest_predict_proba(const Forest& forest,
                                         std::span<const double> row) {
  if (forest.size() == 0) fail(ErrorKind::kInvalidConfig, "empty forest");
  const std::size_t k = forest.trees.front().n_classes();
  std::vector<double> acc(k, 0.0);
  for (const auto& tree : forest.trees) {
    kernels::accumulate(acc, tree.predict_proba(row));
  }
  const double inv = 1.0 / static_cast<double>(forest.size());
  for (double& v : acc) v *= inv;
  return acc;
}

std::vector<double> forest_predict_proba(const Forest& forest, const Dataset& data) {
  const std::size_t k = data.n_classes();
  std::vector<double> out;
  out.reserve(data.n_samples() * k);
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    const auto p = forest_predict_proba(forest, data.row(i));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

double mean_internal_nodes(const Forest& forest) {
  if (forest.size() == 0) return 0.0;
  double sum = 0.0;
  for (const auto& tree : forest.trees) {
    sum += static_cast<double>(tree.n_internal_nodes());
  }
  return sum / static_cast<double>(forest.size());
}

}  // namespace rrf
