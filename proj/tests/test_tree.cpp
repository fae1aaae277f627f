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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rrf/error.hpp"
#include "rrf/tree.hpp"
#include "test_util.hpp"

using namespace rrf;
using Counts = std::vector<std::size_t>;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an rrf::Error");
  return ErrorKind::kInvariantViolation;
}

void check_tree_invariants(const DecisionTree& tree) {
  std::size_t internal = 0;
  double igr_sum = 0.0;
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) {
      const double s = std::accumulate(node.distribution.begin(), node.distribution.end(), 0.0);
      CHECK(std::abs(s - 1.0) < 1e-9);
      for (double p : node.distribution) CHECK(p >= 0.0);
      continue;
    }
    ++internal;
    igr_sum += node.igr;
    const auto& l = tree.nodes()[static_cast<std::size_t>(node.left)];
    const auto& r = tree.nodes()[static_cast<std::size_t>(node.right)];
    CHECK(l.n_samples() + r.n_samples() == node.n_samples());
    CHECK(l.n_samples() >= 1);
    CHECK(r.n_samples() >= 1);
    CHECK(node.igr >= 0.0);
    CHECK(node.igr <= 1.0);
    const double recomputed = info_gain_ratio(node.class_counts, l.class_counts, r.class_counts);
    CHECK(std::abs(recomputed - node.igr) <= 1e-12);
  }
  CHECK(internal == tree.n_internal_nodes());
  const auto w = local_feature_weights(tree, tree.n_features());
  double weighted = 0.0;
  for (double v : w) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    weighted += v * static_cast<double>(internal);
  }
  CHECK(std::abs(weighted - igr_sum) < 1e-9);
}

}  // namespace

TEST_CASE("entropy examples") {
  CHECK(entropy(Counts{10, 0}) == 0.0);
  CHECK(entropy(Counts{5, 5}) == doctest::Approx(1.0).epsilon(1e-15));
  const double oracle = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  CHECK(std::abs(entropy(Counts{1, 3}) - oracle) < 1e-12);
  CHECK(std::abs(entropy(Counts{1, 3}) - 0.811278) < 1e-6);
  CHECK(kind_of([] { entropy(Counts{0, 0}); }) == ErrorKind::kAllZeroCounts);
}

TEST_CASE("property: entropy is permutation invariant and maximal at uniform counts") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng() % 6;
    Counts c(k);
    for (auto& x : c) x = rng() % 20;
    c[0] += 1;
    Counts shuffled = c;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(std::abs(entropy(c) - entropy(shuffled)) < 1e-12);
    CHECK(entropy(c) <= std::log2(static_cast<double>(k)) + 1e-12);
    CHECK(entropy(c) >= 0.0);
    const Counts uniform(k, 7);
    CHECK(std::abs(entropy(uniform) - std::log2(static_cast<double>(k))) < 1e-12);
  }
}

TEST_CASE("info_gain examples") {
  CHECK(info_gain(Counts{5, 5}, Counts{5, 0}, Counts{0, 5}) == doctest::Approx(1.0));
  const double h06 = -(0.6 * std::log2(0.6) + 0.4 * std::log2(0.4));
  const double ig = info_gain(Counts{5, 5}, Counts{3, 2}, Counts{2, 3});
  CHECK(std::abs(ig - (1.0 - h06)) < 1e-12);
  CHECK(std::abs(ig - 0.029049) < 1e-6);
  CHECK(info_gain(Counts{4, 0}, Counts{1, 0}, Counts{3, 0}) == 0.0);
  CHECK(info_gain(Counts{4, 0}, Counts{4, 0}, Counts{0, 0}) == 0.0);
  CHECK(kind_of([] { info_gain(Counts{5, 5}, Counts{3, 2}, Counts{2, 2}); }) ==
        ErrorKind::kInconsistentCounts);
}

TEST_CASE("info_gain_ratio examples") {
  CHECK(info_gain_ratio(Counts{5, 5}, Counts{5, 0}, Counts{0, 5}) == doctest::Approx(1.0));
  const double h06 = -(0.6 * std::log2(0.6) + 0.4 * std::log2(0.4));
  CHECK(std::abs(info_gain_ratio(Counts{5, 5}, Counts{3, 2}, Counts{2, 3}) - (1.0 - h06)) <
        1e-12);
  CHECK(kind_of([] { info_gain_ratio(Counts{8, 0}, Counts{3, 0}, Counts{5, 0}); }) ==
        ErrorKind::kPureParent);
  // base invariance: a three-class gain ratio stays within [0,1]
  const double r = info_gain_ratio(Counts{4, 4, 4}, Counts{4, 4, 0}, Counts{0, 0, 4});
  CHECK(r > 0.0);
  CHECK(r <= 1.0);
}

TEST_CASE("train_tree on a single-class sample yields one leaf") {
  const Dataset ds = testing::make_dataset({{0.0}, {1.0}, {2.0}, {0.0}}, {1, 1, 1, 1});
  Rng rng(1);
  const FeatureList features{0};
  const DecisionTree tree = train_tree(ds, features, {1, 1}, rng);
  CHECK(tree.n_internal_nodes() == 0);
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.nodes()[0].distribution == std::vector<double>{0.0, 1.0});
}

TEST_CASE("train_tree splits the two-point dataset at the midpoint") {
  const Dataset ds = testing::make_dataset({{0.0}, {1.0}}, {0, 1});
  Rng rng(1);
  const FeatureList features{0};
  const DecisionTree tree = train_tree(ds, features, {1, 1}, rng);
  REQUIRE(tree.n_internal_nodes() == 1);
  const auto& root = tree.nodes()[0];
  CHECK(root.feature == 0);
  CHECK(root.threshold == 0.5);
  CHECK(root.igr == doctest::Approx(1.0));
  const std::vector<double> x0{0.0};
  const std::vector<double> x1{1.0};
  CHECK(std::vector<double>(tree.predict_proba(x0).begin(), tree.predict_proba(x0).end()) ==
        std::vector<double>{1.0, 0.0});
  CHECK(std::vector<double>(tree.predict_proba(x1).begin(), tree.predict_proba(x1).end()) ==
        std::vector<double>{0.0, 1.0});
}

TEST_CASE("predict_proba on a leaf-only tree and dimension checks") {
  const DecisionTree tree = testing::leaf_tree({1.0, 0.0}, 3);
  const std::vector<double> row{5.0, -1.0, 2.0};
  const auto p = tree.predict_proba(row);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
  const std::vector<double> short_row{1.0};
  CHECK(kind_of([&] { tree.predict_proba(short_row); }) == ErrorKind::kDimensionMismatch);
}

TEST_CASE("train_tree is deterministic for a fixed seed") {
  const Dataset ds = testing::random_dataset(150, 6, 3, 9);
  const FeatureList features{0, 1, 2, 3, 4, 5};
  Rng a(77);
  Rng b(77);
  const DecisionTree ta = train_tree(ds, features, {2, 1}, a);
  const DecisionTree tb = train_tree(ds, features, {2, 1}, b);
  CHECK(ta == tb);
  Rng c(78);
  CHECK(!(train_tree(ds, features, {2, 1}, c) == ta));
}

TEST_CASE("train_tree argument errors") {
  const Dataset ds = testing::random_dataset(20, 3, 2, 1);
  Rng rng(1);
  const FeatureList features{0, 1};
  const std::vector<std::size_t> none;
  CHECK(kind_of([&] { train_tree(ds, none, features, {1, 1}, rng); }) ==
        ErrorKind::kEmptySample);
  CHECK(kind_of([&] { train_tree(ds, features, {0, 1}, rng); }) == ErrorKind::kFNotPositive);
  CHECK(kind_of([&] { train_tree(ds, features, {3, 1}, rng); }) == ErrorKind::kFNotPositive);
}

TEST_CASE("root split matches exhaustive enumeration when every feature is a candidate") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    const std::size_t k = 2 + rng() % 2;
    const Dataset ds = testing::random_dataset(12 + rng() % 30, d, k, rng());
    FeatureList features(d);
    std::iota(features.begin(), features.end(), FeatureIndex{0});
    Rng tree_rng(rng());
    const DecisionTree tree = train_tree(ds, features, {d, 1}, tree_rng);

    // oracle: every feature, every midpoint, scored by info_gain
    const Counts parent = ds.class_counts();
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> values;
      for (std::size_t i = 0; i < ds.n_samples(); ++i) values.push_back(ds.at(i, j));
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t t = 0; t + 1 < values.size(); ++t) {
        const double thr = (values[t] + values[t + 1]) / 2.0;
        Counts left(k, 0), right(k, 0);
        for (std::size_t i = 0; i < ds.n_samples(); ++i) {
          (ds.at(i, j) <= thr ? left : right)[ds.label(i)]++;
        }
        const double g = info_gain(parent, left, right);
        if (g > best_gain + 1e-12) {
          best_gain = g;
          best_feature = static_cast<int>(j);
          best_threshold = thr;
        }
      }
    }
    const auto& root = tree.nodes()[0];
    if (best_feature < 0 || entropy(parent) == 0.0) {
      CHECK(root.is_leaf());
      continue;
    }
    REQUIRE_FALSE(root.is_leaf());
    const auto& l = tree.nodes()[static_cast<std::size_t>(root.left)];
    const auto& r = tree.nodes()[static_cast<std::size_t>(root.right)];
    CHECK(std::abs(info_gain(root.class_counts, l.class_counts, r.class_counts) - best_gain) <
          1e-9);
    CHECK(root.feature == best_feature);
    CHECK(root.threshold == doctest::Approx(best_threshold));
  }
}

TEST_CASE("property: trained trees satisfy the node invariants") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 2 + rng() % 6;
    const Dataset ds = testing::random_dataset(40 + rng() % 150, d, 2 + rng() % 3, rng());
    FeatureList features(d);
    std::iota(features.begin(), features.end(), FeatureIndex{0});
    const std::size_t min_leaf = 1 + rng() % 4;
    Rng tree_rng(rng());
    const DecisionTree tree =
        train_tree(ds, features, {1 + rng() % d, min_leaf}, tree_rng);
    check_tree_invariants(tree);
    for (const auto& node : tree.nodes()) CHECK(node.n_samples() >= min_leaf);
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
      const auto p = tree.predict_proba(ds.row(i));
      CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("train_tree only splits on the available features") {
  const Dataset ds = testing::random_dataset(120, 5, 2, 4);
  const FeatureList features{1, 3, 4};
  Rng rng(3);
  const DecisionTree tree = train_tree(ds, features, {2, 1}, rng);
  CHECK(tree.feature_set_snapshot() == features);
  for (const auto& node : tree.nodes()) {
    if (!node.is_leaf()) {
      CHECK(std::find(features.begin(), features.end(),
                      static_cast<FeatureIndex>(node.feature)) != features.end());
    }
  }
}

TEST_CASE("local_feature_weights examples") {
  const auto zeros = local_feature_weights(testing::leaf_tree({0.5, 0.5}), 4);
  CHECK(zeros == std::vector<double>(4, 0.0));

  const DecisionTree two = testing::chain_tree({{3, 1.0}, {3, 0.5}}, 5);
  REQUIRE(two.n_internal_nodes() == 2);
  const auto w2 = local_feature_weights(two, 5);
  CHECK(w2[3] == doctest::Approx(0.75));
  CHECK(w2[0] == 0.0);
  CHECK(w2[4] == 0.0);

  const DecisionTree four = testing::chain_tree({{0, 0.8}, {1, 0.3}, {2, 0.4}, {1, 0.1}}, 3);
  const auto w4 = local_feature_weights(four, 3);
  CHECK(w4[0] == doctest::Approx(0.2));
  CHECK(w4[1] == doctest::Approx(0.1));
  CHECK(w4[2] == doctest::Approx(0.1));
}
