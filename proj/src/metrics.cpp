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

#include "rrf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rrf/error.hpp"

namespace rrf {

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) {
    fail(ErrorKind::kLengthMismatch, "prediction and label lengths differ");
  }
  if (truth.empty()) fail(ErrorKind::kLengthMismatch, "empty input");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double auc_binary(std::span<const double> scores,
                  std::span<const unsigned char> positive) {
  if (scores.size() != positive.size()) {
    fail(ErrorKind::kLengthMismatch, "score and label lengths differ");
  }
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (unsigned char p : positive) n_pos += p != 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    fail(ErrorKind::kSingleClassPresent, "AUC needs both classes");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the positive rank sum; mid-ranks of tie groups are half-integers.
  double rank_sum2 = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    std::size_t pos_in_group = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      pos_in_group += positive[order[j]] != 0;
      ++j;
    }
    // ranks i+1 .. j, mid-rank (i + 1 + j) / 2
    rank_sum2 += static_cast<double>(pos_in_group) * static_cast<double>(i + 1 + j);
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double u2 = rank_sum2 - np * (np + 1.0);
  return u2 / (2.0 * np * static_cast<double>(n_neg));
}

double auc_macro_ovr(std::span<const double> probs, std::size_t n_classes,
                     std::span<const Label> labels,
                     std::vector<double>* per_class) {
  if (n_classes < 2) fail(ErrorKind::kNoValidClass, "need at least two classes");
  if (probs.size() != labels.size() * n_classes) {
    fail(ErrorKind::kLengthMismatch, "probability matrix shape mismatch");
  }
  const std::size_t n = labels.size();
  std::vector<std::size_t> counts(n_classes, 0);
  for (Label y : labels) {
    if (y >= n_classes) fail(ErrorKind::kNoValidClass, "label out of range");
    ++counts[y];
  }
  if (per_class) {
    per_class->assign(n_classes, std::numeric_limits<double>::quiet_NaN());
  }

  std::vector<double> column(n);
  std::vector<unsigned char> indicator(n);
  auto class_auc = [&](std::size_t k) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = probs[i * n_classes + k];
      indicator[i] = labels[i] == k;
    }
    return auc_binary(column, indicator);
  };

  if (n_classes == 2) {
    const double auc = class_auc(1);
    if (per_class) {
      (*per_class)[0] = 1.0 - auc;
      (*per_class)[1] = auc;
    }
    return auc;
  }

  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < n_classes; ++k) {
    // OvR is undefined when the class is absent or is every sample.
    if (counts[k] == 0 || counts[k] == n) continue;
    const double auc = class_auc(k);
    if (per_class) (*per_class)[k] = auc;
    sum += auc;
    ++used;
  }
  if (used == 0) fail(ErrorKind::kNoValidClass, "no class admits an OvR AUC");
  return sum / static_cast<double>(used);
}

Label argmax(std::span<const double> probs) {
  return static_cast<Label>(std::max_element(probs.begin(), probs.end()) -
                            probs.begin());
}

EvalReport evaluate(std::span<const double> probs, std::size_t n_classes,
                    std::span<const Label> labels) {
  EvalReport report;
  report.n_samples = labels.size();
  std::vector<Label> predicted(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    predicted[i] = argmax(probs.subspan(i * n_classes, n_classes));
  }
  report.accuracy = accuracy(predicted, labels);
  std::vector<double> per_class;
  report.auc = auc_macro_ovr(probs, n_classes, labels, &per_class);
  report.per_class_auc = std::move(per_class);
  return report;
}

}  // namespace rrf
