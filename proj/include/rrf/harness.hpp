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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/diversity.hpp"
#include "rrf/refine.hpp"

namespace rrf {

struct RunConfig {
  std::filesystem::path dataset_path;
  std::string label_column;
  SplitSpec split;  // split.seed is ignored; each repeat derives its own
  std::uint64_t seed = 42;
  std::size_t repeats = 1;
  std::size_t t0 = 20;
  std::size_t min_leaf = 1;
  double correlation_threshold = kDefaultCorrelationThreshold;
  std::size_t max_iterations = 100;
  std::size_t delta_b_cap = kDefaultDeltaBCap;
  std::optional<std::size_t> subsample;
  std::size_t n_threads = 0;  // not part of the report; results are invariant

  void validate() const;
};

struct RepeatRecord {
  std::uint64_t seed = 0;
  double rf_accuracy = 0.0;
  double rf_auc = 0.0;
  double rrf_accuracy = 0.0;
  double rrf_auc = 0.0;
  std::size_t trees_before_pruning = 0;
  std::size_t trees_after_pruning = 0;
  std::size_t iterations = 0;
  std::size_t final_features = 0;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one repeat
};

struct Aggregates {
  Summary rf_accuracy, rf_auc, rrf_accuracy, rrf_auc;
  Summary trees_before_pruning, trees_after_pruning, iterations;
};

// In-memory detail of one repeat; not serialised.
struct RepeatArtifacts {
  RefineResult refined;
  PruningResult pruning;
};

struct ComparisonReport {
  RunConfig config;
  std::string dataset_name;
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::vector<RepeatRecord> records;
  Aggregates aggregates;
  SymmetricMatrix corr_before;  // final repeat
  SymmetricMatrix corr_after;
  std::vector<RepeatArtifacts> artifacts;
};

/// One repeat on an already-loaded dataset.
RepeatArtifacts run_repeat(const Dataset& data, const RunConfig& config,
                           std::size_t repeat, RepeatRecord& record);

/// Per repeat: stratified split, refine + correlation pruning (Q trees), then
/// a standard forest with exactly Q trees on all features; both are scored on
/// the held-out test split.
ComparisonReport run_comparison(const RunConfig& config);
ComparisonReport run_comparison(const Dataset& data, const RunConfig& config,
                                std::string dataset_name);

Aggregates aggregate(const std::vector<RepeatRecord>& records);

/// report.json contents (config, records, aggregates).
std::string report_json(const ComparisonReport& report);

/// Writes report.json, summary.csv, corr_before.csv and corr_after.csv.
void emit_report(const ComparisonReport& report, const std::filesystem::path& out_dir);

}  // namespace rrf
