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

#include "rrf/refine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <numeric>

#include "rrf/error.hpp"
#include "rrf/metrics.hpp"
#include "rrf/seed.hpp"

namespace rrf {

namespace {

std::size_t isqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

FeatureList sorted(std::span<const FeatureIndex> xs) {
  FeatureList out(xs.begin(), xs.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FeatureList set_union(const FeatureList& a, const FeatureList& b) {
  FeatureList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

FeatureList set_difference(const FeatureList& a, const FeatureList& b) {
  FeatureList out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const FeatureList& sub, const FeatureList& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

double weight_of(std::span<const double> weights, FeatureIndex j) {
  if (j >= weights.size()) {
    fail(ErrorKind::kDimensionMismatch,
         "no weight for feature " + std::to_string(j));
  }
  return weights[j];
}

}  // namespace

FeaturePools initial_pools(std::span<const double> weights,
                           std::span<const FeatureIndex> initial_features) {
  FeaturePools pools;
  pools.active = sorted(initial_features);
  FeatureList ranked = pools.active;
  std::stable_sort(ranked.begin(), ranked.end(), [&](FeatureIndex a, FeatureIndex b) {
    return weight_of(weights, a) > weight_of(weights, b);
  });
  ranked.resize(std::min(isqrt(pools.active.size()), ranked.size()));
  pools.important = sorted(ranked);
  pools.unimportant = set_difference(pools.active, pools.important);
  return pools;
}

FeatureList prune_set(std::span<const FeatureIndex> pool,
                      std::span<const double> weights) {
  if (pool.empty()) fail(ErrorKind::kEmptyPool, "cannot prune an empty pool");
  const double n = static_cast<double>(pool.size());
  double mean = 0.0;
  for (FeatureIndex j : pool) mean += weight_of(weights, j);
  mean /= n;
  double var = 0.0;
  for (FeatureIndex j : pool) {
    const double d = weights[j] - mean;
    var += d * d;
  }
  const double cutoff = mean - 2.0 * std::sqrt(var / n);

  FeatureList out;
  for (FeatureIndex j : pool) {
    if (weights[j] < cutoff) out.push_back(j);
  }
  if (out.empty()) {
    double lowest = weights[pool.front()];
    for (FeatureIndex j : pool) lowest = std::min(lowest, weights[j]);
    for (FeatureIndex j : pool) {
      if (weights[j] == lowest) out.push_back(j);
    }
  }
  return sorted(out);
}

FeatureList promote_set(std::span<const FeatureIndex> unimportant,
                        std::span<const FeatureIndex> important,
                        std::span<const double> weights) {
  if (important.empty()) {
    fail(ErrorKind::kEmptyImportantPool, "important pool is empty");
  }
  double floor = weight_of(weights, important.front());
  for (FeatureIndex j : important) floor = std::min(floor, weight_of(weights, j));
  FeatureList out;
  for (FeatureIndex j : unimportant) {
    if (weight_of(weights, j) >= floor) out.push_back(j);
  }
  return sorted(out);
}

PoolUpdate update_pools(const FeaturePools& pools, std::span<const FeatureIndex> pruned,
                        std::span<const FeatureIndex> promoted) {
  const FeatureList r = sorted(pruned);
  const FeatureList a = sorted(promoted);
  if (!is_subset(r, pools.unimportant) || !is_subset(a, pools.unimportant)) {
    fail(ErrorKind::kOverlapViolation, "R and A must be drawn from U");
  }
  FeatureList both;
  std::set_intersection(r.begin(), r.end(), a.begin(), a.end(), std::back_inserter(both));
  if (!both.empty()) {
    fail(ErrorKind::kOverlapViolation, "a feature cannot be pruned and promoted");
  }

  PoolUpdate out;
  out.pools.active = set_difference(pools.active, r);
  out.pools.important = set_union(pools.important, a);
  out.pools.unimportant = set_difference(pools.unimportant, set_union(r, a));
  out.pools.removed = set_union(pools.removed, r);
  out.delta_u = static_cast<std::int64_t>(out.pools.important.size()) -
                static_cast<std::int64_t>(pools.important.size());
  out.delta_v = static_cast<std::int64_t>(out.pools.unimportant.size()) -
                static_cast<std::int64_t>(pools.unimportant.size());
  return out;
}

void RefineConfig::validate() const {
  if (initial_trees == 0) fail(ErrorKind::kInvalidConfig, "initial_trees must be >= 1");
  if (min_leaf == 0) fail(ErrorKind::kInvalidConfig, "min_leaf must be >= 1");
}

namespace {

double validation_accuracy(const Forest& forest, const Dataset& valid) {
  if (valid.n_samples() == 0) return 0.0;
  std::vector<Label> predicted(valid.n_samples());
  for (std::size_t i = 0; i < valid.n_samples(); ++i) {
    predicted[i] = argmax(forest_predict_proba(forest, valid.row(i)));
  }
  return accuracy(predicted, valid.labels());
}

}  // namespace

RefineResult refine(const Dataset& train, const Dataset& valid,
                    const RefineConfig& config) {
  config.validate();
  const std::size_t d = train.n_features();
  if (d == 0) fail(ErrorKind::kEmptyFeatureSet, "dataset has no features");

  FeatureList f0(d);
  std::iota(f0.begin(), f0.end(), FeatureIndex{0});
  const std::size_t f = config.features_per_node ? config.features_per_node : isqrt(d);

  ForestParams forest_params;
  forest_params.tree.features_per_node = f;
  forest_params.tree.min_leaf = config.min_leaf;
  forest_params.n_threads = config.n_threads;
  forest_params.n_trees = config.initial_trees;
  forest_params.seed = derive_seed(config.seed, 0);

  RefineResult result;
  result.features_per_node = f;
  result.forest = train_forest(train, f0, forest_params);
  result.weights = global_feature_weights(result.forest, d).weights;
  result.pools = initial_pools(result.weights, f0);
  result.initial_valid_accuracy = validation_accuracy(result.forest, valid);

  std::size_t n_trees = config.initial_trees;
  for (std::size_t n = 0;
       result.pools.unimportant.size() >= f && n < config.max_iterations; ++n) {
    IterationTrace step;
    step.iteration = n;
    step.before = result.pools;

    // Promotion wins over pruning: R is taken from U \ A.
    step.promoted = promote_set(result.pools.unimportant, result.pools.important,
                                result.weights);
    const FeatureList prunable = set_difference(result.pools.unimportant, step.promoted);
    if (!prunable.empty()) step.pruned = prune_set(prunable, result.weights);
    if (step.pruned.size() >= result.pools.active.size()) {
      fail(ErrorKind::kEmptyFeatureSet, "pruning would remove every feature");
    }

    const PoolUpdate update = update_pools(result.pools, step.pruned, step.promoted);

    GrowthParams growth;
    growth.u = result.pools.important.size();
    growth.v = result.pools.unimportant.size();
    growth.f = f;
    growth.t_av = mean_internal_nodes(result.forest);
    growth.b = n_trees;
    growth.delta_u = update.delta_u;
    growth.delta_v = update.delta_v;
    step.growth = evaluate_growth(growth, config.delta_b_cap);

    n_trees += step.growth.delta_b;
    result.pools = update.pools;
    step.after = result.pools;

    forest_params.n_trees = n_trees;
    forest_params.seed = derive_seed(config.seed, n + 1);
    result.forest = train_forest(train, result.pools.active, forest_params);
    result.weights = global_feature_weights(result.forest, d).weights;

    step.n_trees = n_trees;
    step.valid_accuracy = validation_accuracy(result.forest, valid);
    result.trace.push_back(std::move(step));
  }
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const IterationTrace> trace) {
  out << "n,n_features,n_important,n_unimportant,n_pruned,n_promoted,delta_b,"
         "valid_accuracy\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(6);
  for (const auto& t : trace) {
    out << t.iteration << ',' << t.after.active.size() << ','
        << t.after.important.size() << ',' << t.after.unimportant.size() << ','
        << t.pruned.size() << ',' << t.promoted.size() << ',' << t.growth.delta_b
        << ',' << t.valid_accuracy << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace rrf
