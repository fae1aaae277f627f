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

#include "rrf/harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "rrf/error.hpp"
#include "rrf/metrics.hpp"
#include "rrf/seed.hpp"

namespace rrf {

namespace {

constexpr std::uint64_t kSubsampleStream = 0x5b5;
constexpr std::uint64_t kRefineStream = 1;
constexpr std::uint64_t kBaselineStream = 2;

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace

void RunConfig::validate() const {
  split.validate();
  if (repeats == 0) fail(ErrorKind::kInvalidConfig, "repeats must be >= 1");
  if (t0 == 0) fail(ErrorKind::kInvalidConfig, "t0 must be >= 1");
  if (min_leaf == 0) fail(ErrorKind::kInvalidConfig, "min_leaf must be >= 1");
  if (!(correlation_threshold > 0.0 && correlation_threshold <= 1.0)) {
    fail(ErrorKind::kInvalidConfig, "correlation threshold must lie in (0, 1]");
  }
  if (subsample && *subsample == 0) {
    fail(ErrorKind::kInvalidConfig, "subsample must be >= 1");
  }
}

RepeatArtifacts run_repeat(const Dataset& data, const RunConfig& config,
                           std::size_t repeat, RepeatRecord& record) {
  const std::uint64_t seed = derive_seed(config.seed, repeat);
  SplitSpec spec = config.split;
  spec.seed = seed;
  const SplitResult split = stratified_split(data, spec);

  RefineConfig rc;
  rc.initial_trees = config.t0;
  rc.min_leaf = config.min_leaf;
  rc.max_iterations = config.max_iterations;
  rc.delta_b_cap = config.delta_b_cap;
  rc.seed = derive_seed(seed, kRefineStream);
  rc.n_threads = config.n_threads;

  RepeatArtifacts artifacts;
  artifacts.refined = refine(split.train, split.valid, rc);
  PrunedForest pruned = prune_correlated(artifacts.refined.forest, split.valid,
                                         config.correlation_threshold);
  artifacts.pruning = std::move(pruned.result);
  const std::size_t q = pruned.forest.size();

  FeatureList all(data.n_features());
  std::iota(all.begin(), all.end(), FeatureIndex{0});
  ForestParams baseline_params;
  baseline_params.n_trees = q;
  baseline_params.tree.features_per_node = artifacts.refined.features_per_node;
  baseline_params.tree.min_leaf = config.min_leaf;
  baseline_params.seed = derive_seed(seed, kBaselineStream);
  baseline_params.n_threads = config.n_threads;
  const Forest baseline = train_forest(split.train, all, baseline_params);
  if (baseline.size() != pruned.forest.size()) {
    fail(ErrorKind::kInvariantViolation, "baseline and refined tree counts differ");
  }

  const std::size_t k = data.n_classes();
  const EvalReport rf =
      evaluate(forest_predict_proba(baseline, split.test), k, split.test.labels());
  const EvalReport rrf =
      evaluate(forest_predict_proba(pruned.forest, split.test), k, split.test.labels());

  record.seed = seed;
  record.rf_accuracy = rf.accuracy;
  record.rf_auc = rf.auc;
  record.rrf_accuracy = rrf.accuracy;
  record.rrf_auc = rrf.auc;
  record.trees_before_pruning = artifacts.refined.forest.size();
  record.trees_after_pruning = q;
  record.iterations = artifacts.refined.trace.size();
  record.final_features = artifacts.refined.pools.active.size();
  if (record.trees_after_pruning > record.trees_before_pruning) {
    fail(ErrorKind::kInvariantViolation, "pruning increased the tree count");
  }
  return artifacts;
}

Aggregates aggregate(const std::vector<RepeatRecord>& records) {
  auto column = [&](auto field) {
    std::vector<double> xs;
    for (const auto& r : records) xs.push_back(static_cast<double>(r.*field));
    return summarize(xs);
  };
  Aggregates a;
  a.rf_accuracy = column(&RepeatRecord::rf_accuracy);
  a.rf_auc = column(&RepeatRecord::rf_auc);
  a.rrf_accuracy = column(&RepeatRecord::rrf_accuracy);
  a.rrf_auc = column(&RepeatRecord::rrf_auc);
  a.trees_before_pruning = column(&RepeatRecord::trees_before_pruning);
  a.trees_after_pruning = column(&RepeatRecord::trees_after_pruning);
  a.iterations = column(&RepeatRecord::iterations);
  return a;
}

ComparisonReport run_comparison(const Dataset& data, const RunConfig& config,
                                std::string dataset_name) {
  config.validate();
  ComparisonReport report;
  report.config = config;
  report.dataset_name = std::move(dataset_name);
  const Dataset working =
      config.subsample ? subsample(data, *config.subsample,
                                   derive_seed(config.seed, kSubsampleStream))
                       : data;
  report.n_samples = working.n_samples();
  report.n_features = working.n_features();
  report.n_classes = working.n_classes();

  for (std::size_t r = 0; r < config.repeats; ++r) {
    RepeatRecord record;
    report.artifacts.push_back(run_repeat(working, config, r, record));
    report.records.push_back(record);
  }
  report.aggregates = aggregate(report.records);

  const PruningResult& last = report.artifacts.back().pruning;
  report.corr_before = last.correlation;
  report.corr_after = last.correlation.select(last.retained);
  return report;
}

ComparisonReport run_comparison(const RunConfig& config) {
  config.validate();
  const Dataset data = load_csv(config.dataset_path, config.label_column);
  return run_comparison(data, config, config.dataset_path.stem().string());
}

std::string report_json(const ComparisonReport& report) {
  using nlohmann::ordered_json;
  const RunConfig& c = report.config;
  ordered_json config = {
      {"dataset", report.dataset_name},
      {"label_column", c.label_column},
      {"split", {c.split.train_fraction, c.split.valid_fraction, c.split.test_fraction}},
      {"seed", c.seed},
      {"repeats", c.repeats},
      {"t0", c.t0},
      {"min_leaf", c.min_leaf},
      {"correlation_threshold", c.correlation_threshold},
      {"max_iterations", c.max_iterations},
      {"delta_b_cap", c.delta_b_cap},
      {"subsample", c.subsample ? ordered_json(*c.subsample) : ordered_json(nullptr)},
      {"n_samples", report.n_samples},
      {"n_features", report.n_features},
      {"n_classes", report.n_classes},
  };
  ordered_json records = ordered_json::array();
  for (const auto& r : report.records) {
    records.push_back({
        {"seed", r.seed},
        {"rf_accuracy", r.rf_accuracy},
        {"rf_auc", r.rf_auc},
        {"rrf_accuracy", r.rrf_accuracy},
        {"rrf_auc", r.rrf_auc},
        {"trees_before_pruning", r.trees_before_pruning},
        {"trees_after_pruning", r.trees_after_pruning},
        {"iterations", r.iterations},
        {"final_features", r.final_features},
    });
  }
  auto summary = [](const Summary& s) {
    return ordered_json{{"mean", s.mean}, {"std", s.stddev}};
  };
  const Aggregates& a = report.aggregates;
  ordered_json aggregates = {
      {"rf_accuracy", summary(a.rf_accuracy)},
      {"rf_auc", summary(a.rf_auc)},
      {"rrf_accuracy", summary(a.rrf_accuracy)},
      {"rrf_auc", summary(a.rrf_auc)},
      {"trees_before_pruning", summary(a.trees_before_pruning)},
      {"trees_after_pruning", summary(a.trees_after_pruning)},
      {"iterations", summary(a.iterations)},
  };
  ordered_json doc = {
      {"config", std::move(config)},
      {"records", std::move(records)},
      {"aggregates", std::move(aggregates)},
  };
  return doc.dump(2) + "\n";
}

void emit_report(const ComparisonReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  write_file(out_dir / "report.json", report_json(report));

  const Aggregates& a = report.aggregates;
  std::ostringstream summary;
  summary << "dataset,repeats,rf_accuracy,rrf_accuracy,rf_auc,rrf_auc,"
             "trees_before_pruning,trees_after_pruning\n";
  summary << report.dataset_name << ',' << report.records.size() << std::fixed
          << std::setprecision(6) << ',' << a.rf_accuracy.mean << ','
          << a.rrf_accuracy.mean << ',' << a.rf_auc.mean << ',' << a.rrf_auc.mean
          << ',' << a.trees_before_pruning.mean << ',' << a.trees_after_pruning.mean
          << '\n';
  write_file(out_dir / "summary.csv", summary.str());

  std::ostringstream before;
  write_matrix_csv(before, report.corr_before);
  write_file(out_dir / "corr_before.csv", before.str());
  std::ostringstream after;
  write_matrix_csv(after, report.corr_after);
  write_file(out_dir / "corr_after.csv", after.str());
}

}  // namespace rrf
