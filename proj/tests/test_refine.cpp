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

#include <sstream>

#include "doctest.h"
#include "invariants.hpp"
#include "rrf/error.hpp"
#include "rrf/refine.hpp"
#include "test_util.hpp"

using namespace rrf;

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

FeatureList range(FeatureIndex n) {
  FeatureList out;
  for (FeatureIndex i = 0; i < n; ++i) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("initial_pools sizes and tie-breaking") {
  const std::vector<double> w10{0.1, 0.9, 0.3, 0.5, 0.2, 0.8, 0.4, 0.6, 0.7, 0.0};
  const FeaturePools p10 = initial_pools(w10, range(10));
  CHECK(p10.important == FeatureList{1, 5, 8});
  CHECK(p10.unimportant.size() == 7);

  const std::vector<double> w1{0.3};
  const FeaturePools p1 = initial_pools(w1, range(1));
  CHECK(p1.important == FeatureList{0});
  CHECK(p1.unimportant.empty());

  const std::vector<double> w4{0.2, 1.0, 0.9, 0.9};
  const FeaturePools p4 = initial_pools(w4, range(4));
  CHECK(p4.important == FeatureList{1, 2});
  CHECK(p4.unimportant == FeatureList{0, 3});
  CHECK(p4.active == range(4));
  CHECK(invariants::check_pools(p4, 4).empty());
}

TEST_CASE("prune_set examples") {
  std::vector<double> w(10, 0.5);
  w[6] = 0.0;
  CHECK(prune_set(range(10), w) == FeatureList{6});

  const std::vector<double> close{0.5, 0.48, 0.46};
  CHECK(prune_set(range(3), close) == FeatureList{2});

  const std::vector<double> single{0.0, 0.7};
  CHECK(prune_set(FeatureList{1}, single) == FeatureList{1});

  const std::vector<double> tied{0.3, 0.1, 0.1, 0.9};
  CHECK(prune_set(range(4), tied) == FeatureList{1, 2});

  CHECK(kind_of([] { prune_set(FeatureList{}, std::vector<double>{}); }) ==
        ErrorKind::kEmptyPool);
}

TEST_CASE("property: prune_set is nonempty and drawn from the pool") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + rng() % 25;
    std::vector<double> w(d);
    for (double& x : w) x = std::round(u(rng) * 8.0) / 8.0;
    FeatureList pool;
    for (FeatureIndex j = 0; j < d; ++j) {
      if (rng() % 3) pool.push_back(j);
    }
    if (pool.empty()) pool.push_back(0);
    const FeatureList r = prune_set(pool, w);
    REQUIRE_FALSE(r.empty());
    CHECK(std::includes(pool.begin(), pool.end(), r.begin(), r.end()));
    double lowest = 1e9;
    for (auto j : pool) lowest = std::min(lowest, w[j]);
    CHECK(w[r.front()] <= lowest + 1e-12);
  }
}

TEST_CASE("promote_set examples") {
  const std::vector<double> w{0.6, 0.7, 0.3};
  CHECK(promote_set(FeatureList{1, 2}, FeatureList{0}, w) == FeatureList{1});
  CHECK(promote_set(FeatureList{}, FeatureList{0}, w).empty());
  const std::vector<double> low{0.6, 0.2, 0.3};
  CHECK(promote_set(FeatureList{1, 2}, FeatureList{0}, low).empty());
  CHECK(kind_of([&] { promote_set(FeatureList{1}, FeatureList{}, w); }) ==
        ErrorKind::kEmptyImportantPool);
}

TEST_CASE("update_pools examples") {
  FeaturePools p;
  p.active = range(5);
  p.important = {0};
  p.unimportant = {1, 2, 3, 4};

  const PoolUpdate a = update_pools(p, FeatureList{4}, FeatureList{1});
  CHECK(a.pools.active == FeatureList{0, 1, 2, 3});
  CHECK(a.pools.important == FeatureList{0, 1});
  CHECK(a.pools.unimportant == FeatureList{2, 3});
  CHECK(a.pools.removed == FeatureList{4});
  CHECK(a.delta_u == 1);
  CHECK(a.delta_v == -2);

  const PoolUpdate same = update_pools(p, FeatureList{}, FeatureList{});
  CHECK(same.pools == p);
  CHECK(same.delta_u == 0);
  CHECK(same.delta_v == 0);

  const PoolUpdate all = update_pools(p, p.unimportant, FeatureList{});
  CHECK(all.pools.unimportant.empty());
  CHECK(all.delta_v == -4);

  CHECK(kind_of([&] { update_pools(p, FeatureList{0}, FeatureList{}); }) ==
        ErrorKind::kOverlapViolation);
  CHECK(kind_of([&] { update_pools(p, FeatureList{2}, FeatureList{2}); }) ==
        ErrorKind::kOverlapViolation);
}

TEST_CASE("refine on four features terminates within three iterations") {
  const Dataset ds = testing::random_dataset(240, 4, 2, 8);
  const SplitResult s = stratified_split(ds, {0.6, 0.2, 0.2, 3});
  RefineConfig cfg;
  cfg.initial_trees = 10;
  cfg.seed = 5;
  cfg.n_threads = 1;
  const RefineResult r = refine(s.train, s.valid, cfg);
  CHECK(r.features_per_node == 2);
  CHECK(r.trace.size() <= 3);
  CHECK(r.pools.unimportant.size() < 2);
  CHECK(invariants::check_refinement(r, 4) == "");
  for (const auto& step : r.trace) CHECK(step.before.unimportant.size() >= 2);
}

TEST_CASE("refine with max_iterations = 0 returns the initial forest") {
  const Dataset ds = testing::random_dataset(200, 9, 3, 14);
  const SplitResult s = stratified_split(ds, {0.6, 0.2, 0.2, 1});
  RefineConfig cfg;
  cfg.initial_trees = 7;
  cfg.max_iterations = 0;
  cfg.seed = 2;
  const RefineResult r = refine(s.train, s.valid, cfg);
  CHECK(r.trace.empty());
  CHECK(r.forest.size() == 7);
  CHECK(r.pools.active == range(9));
}

TEST_CASE("refine is deterministic") {
  const Dataset ds = testing::random_dataset(220, 8, 2, 15);
  const SplitResult s = stratified_split(ds, {0.6, 0.2, 0.2, 4});
  RefineConfig cfg;
  cfg.seed = 77;
  cfg.n_threads = 1;
  const RefineResult a = refine(s.train, s.valid, cfg);
  cfg.n_threads = 3;
  const RefineResult b = refine(s.train, s.valid, cfg);
  CHECK(a.forest == b.forest);
  CHECK(a.pools == b.pools);
  CHECK(a.trace.size() == b.trace.size());
}

TEST_CASE("refine on WDBC prunes at least one feature") {
  const Dataset ds = load_csv(RRF_DATA_DIR "/wdbc.csv", "diagnosis");
  const SplitResult s = stratified_split(ds, {0.6, 0.2, 0.2, 42});
  RefineConfig cfg;
  cfg.initial_trees = 20;
  cfg.seed = 42;
  const RefineResult r = refine(s.train, s.valid, cfg);
  CHECK(r.pools.active.size() < 30);
  CHECK_FALSE(r.trace.empty());
  CHECK(invariants::check_refinement(r, 30) == "");
  std::size_t trees = 20;
  for (const auto& step : r.trace) {
    trees += step.growth.delta_b;
    CHECK(step.n_trees == trees);
    CHECK(step.growth.delta_b <= cfg.delta_b_cap);
  }
  CHECK(r.forest.size() == trees);
  CHECK(r.forest.feature_set == r.pools.active);
}

TEST_CASE("write_trace_csv layout") {
  const Dataset ds = testing::random_dataset(240, 9, 2, 3);
  const SplitResult s = stratified_split(ds, {0.6, 0.2, 0.2, 3});
  RefineConfig cfg;
  cfg.seed = 1;
  const RefineResult r = refine(s.train, s.valid, cfg);
  REQUIRE_FALSE(r.trace.empty());
  std::ostringstream out;
  write_trace_csv(out, r.trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,n_features,n_important,n_unimportant,n_pruned,n_promoted,delta_b,"
                "valid_accuracy");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
    ++rows;
  }
  CHECK(rows == r.trace.size());
  CHECK(out.str().find(std::to_string(r.trace.front().after.active.size())) !=
        std::string::npos);
}
