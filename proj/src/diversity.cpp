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

#include "rrf/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include "rrf/error.hpp"
#include "rrf/kernels.hpp"
#include "rrf/metrics.hpp"

namespace rrf {

SymmetricMatrix SymmetricMatrix::select(std::span<const std::size_t> keep) const {
  SymmetricMatrix out(keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < keep.size(); ++b) {
      out.data_[a * out.n_ + b] = (*this)(keep[a], keep[b]);
    }
  }
  return out;
}

PredictionMatrix prediction_matrix(const Forest& forest, const Dataset& valid) {
  if (valid.n_samples() == 0) fail(ErrorKind::kEmptySample, "empty validation set");
  PredictionMatrix out;
  out.n_rows = valid.n_samples();
  out.n_classes = valid.n_classes();
  out.vectors.reserve(forest.size());
  for (std::size_t t = 0; t < forest.size(); ++t) {
    const DecisionTree& tree = forest.trees[t];
    if (tree.n_classes() != out.n_classes) {
      fail(ErrorKind::kDimensionMismatch, "class count differs from validation set");
    }
    std::vector<double> v;
    v.reserve(out.n_rows * out.n_classes);
    for (std::size_t i = 0; i < out.n_rows; ++i) {
      const auto p = tree.predict_proba(valid.row(i));
      v.insert(v.end(), p.begin(), p.end());
    }
    out.vectors.push_back(std::move(v));
    out.tree_ids.push_back(t);
  }
  return out;
}

SymmetricMatrix pearson_matrix(const PredictionMatrix& preds) {
  const std::size_t t_count = preds.vectors.size();
  SymmetricMatrix corr(t_count);
  if (t_count == 0) return corr;
  const std::size_t len = preds.vectors.front().size();
  if (len < 2) fail(ErrorKind::kDimensionMismatch, "prediction vectors need length >= 2");

  std::vector<std::vector<double>> centered(t_count);
  std::vector<double> norm(t_count);
  std::vector<unsigned char> constant(t_count);
  for (std::size_t t = 0; t < t_count; ++t) {
    if (preds.vectors[t].size() != len) {
      fail(ErrorKind::kDimensionMismatch, "prediction vectors differ in length");
    }
    const auto& v = preds.vectors[t];
    constant[t] = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    centered[t] = v;
    const double mean = kernels::sum(centered[t]) / static_cast<double>(len);
    kernels::subtract(centered[t], mean);
    norm[t] = std::sqrt(kernels::dot(centered[t], centered[t]));
  }

  auto constant_pair = [&](std::size_t i, std::size_t j) {
    const auto& a = preds.vectors[i];
    const auto& b = preds.vectors[j];
    for (std::size_t k = 0; k < len; ++k) {
      if (std::abs(a[k] - b[k]) > 1e-12) return 0.0;
    }
    return 1.0;
  };

  for (std::size_t i = 0; i < t_count; ++i) {
    corr.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < t_count; ++j) {
      double r = 0.0;
      if (constant[i] && constant[j]) {
        r = constant_pair(i, j);
      } else if (!constant[i] && !constant[j]) {
        r = kernels::dot(centered[i], centered[j]) / (norm[i] * norm[j]);
        r = std::clamp(r, -1.0, 1.0);
      }
      corr.set(i, j, r);
    }
  }
  return corr;
}

Clusters cluster_by_threshold(const SymmetricMatrix& corr, double th) {
  if (!(th > 0.0 && th <= 1.0)) {
    fail(ErrorKind::kInvalidConfig, "threshold must lie in (0, 1]");
  }
  const std::size_t n = corr.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (corr(i, j) < th) continue;
      const std::size_t a = find(i);
      const std::size_t b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // Roots are the smallest members, so visiting in index order yields
  // clusters sorted by their smallest member.
  Clusters clusters;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == n) {
      slot[root] = clusters.size();
      clusters.emplace_back();
    }
    clusters[slot[root]].push_back(i);
  }
  return clusters;
}

std::vector<double> per_tree_auc(const PredictionMatrix& preds,
                                 std::span<const Label> labels) {
  if (labels.size() != preds.n_rows) {
    fail(ErrorKind::kLengthMismatch, "labels do not match the prediction rows");
  }
  std::vector<unsigned char> present(preds.n_classes, 0);
  for (Label y : labels) present.at(y) = 1;
  if (std::count(present.begin(), present.end(), 1) < 2) {
    fail(ErrorKind::kSingleClassPresent, "validation data has a single class");
  }
  std::vector<double> out;
  out.reserve(preds.vectors.size());
  for (const auto& v : preds.vectors) {
    out.push_back(auc_macro_ovr(v, preds.n_classes, labels));
  }
  return out;
}

std::vector<std::size_t> select_representatives(const Clusters& clusters,
                                                std::span<const double> auc) {
  std::vector<std::size_t> out;
  for (const auto& cluster : clusters) {
    if (cluster.empty()) continue;
    std::size_t best = cluster.front();
    for (std::size_t t : cluster) {
      if (auc[t] > auc[best] || (auc[t] == auc[best] && t < best)) best = t;
    }
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PrunedForest prune_correlated(const Forest& forest, const Dataset& valid, double th) {
  if (forest.size() == 0) fail(ErrorKind::kInvalidConfig, "empty forest");
  const PredictionMatrix preds = prediction_matrix(forest, valid);

  PrunedForest out;
  PruningResult& result = out.result;
  result.threshold = th;
  result.correlation = pearson_matrix(preds);
  result.clusters = cluster_by_threshold(result.correlation, th);
  result.per_tree_auc = per_tree_auc(preds, valid.labels());

  result.retained = select_representatives(result.clusters, result.per_tree_auc);
  out.forest = forest.subset(result.retained);
  return out;
}

void write_matrix_csv(std::ostream& out, const SymmetricMatrix& m) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace rrf
