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
#include <ostream>
#include <span>
#include <vector>

#include "rrf/dataset.hpp"
#include "rrf/forest.hpp"

namespace rrf {

inline constexpr double kDefaultCorrelationThreshold = 0.93;

// Square matrix, row-major.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }

  // Principal submatrix on `keep`.
  SymmetricMatrix select(std::span<const std::size_t> keep) const;

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct PredictionMatrix {
  std::size_t n_rows = 0;
  std::size_t n_classes = 0;
  // vectors[t] is tree t's n_rows x n_classes probability matrix, row-major.
  std::vector<std::vector<double>> vectors;
  std::vector<std::size_t> tree_ids;
};

PredictionMatrix prediction_matrix(const Forest& forest, const Dataset& valid);

/// Pearson correlation of every pair of prediction vectors. Unit diagonal.
/// Constant vectors: two constants correlate 1 when equal within 1e-12 and 0
/// otherwise; a constant against a non-constant correlates 0.
SymmetricMatrix pearson_matrix(const PredictionMatrix& preds);

using Clusters = std::vector<std::vector<std::size_t>>;

/// Connected components of the graph with an edge wherever corr >= th.
/// Members ascending, clusters ordered by smallest member.
Clusters cluster_by_threshold(const SymmetricMatrix& corr, double th);

/// Per-tree AUC against `labels` (binary: column 1; multiclass: macro OvR).
std::vector<double> per_tree_auc(const PredictionMatrix& preds,
                                 std::span<const Label> labels);

/// Highest-AUC member of each cluster (ties: lowest id), ascending.
std::vector<std::size_t> select_representatives(const Clusters& clusters,
                                                std::span<const double> auc);

struct PruningResult {
  SymmetricMatrix correlation;
  Clusters clusters;
  std::vector<double> per_tree_auc;
  std::vector<std::size_t> retained;  // ascending tree ids, one per cluster
  double threshold = kDefaultCorrelationThreshold;
};

struct PrunedForest {
  Forest forest;
  PruningResult result;
};

/// Keeps the highest-AUC tree of every correlation cluster (ties: lowest id).
PrunedForest prune_correlated(const Forest& forest, const Dataset& valid,
                              double th = kDefaultCorrelationThreshold);

/// T x T matrix, fixed 6-decimal values, no header.
void write_matrix_csv(std::ostream& out, const SymmetricMatrix& m);

}  // namespace rrf
