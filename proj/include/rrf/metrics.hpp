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
#include <optional>
#include <span>
#include <vector>

#include "rrf/dataset.hpp"

namespace rrf {

struct EvalReport {
  double accuracy = 0.0;
  double auc = 0.0;
  std::size_t n_samples = 0;
  std::optional<std::vector<double>> per_class_auc;
};

double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

/// Mann-Whitney AUC via mid-rank sums. Ties count one half. `positive[i]` is
/// nonzero for the positive class.
double auc_binary(std::span<const double> scores,
                  std::span<const unsigned char> positive);

/// Macro one-vs-rest AUC over the classes present in `labels`.
/// `probs` is row-major n x n_classes. With two classes this is the AUC of
/// column 1. Absent classes are skipped; `per_class` (if given) receives
/// one entry per class with NaN for skipped classes.
double auc_macro_ovr(std::span<const double> probs, std::size_t n_classes,
                     std::span<const Label> labels,
                     std::vector<double>* per_class = nullptr);

/// Index of the largest probability; ties go to the lowest class.
Label argmax(std::span<const double> probs);

/// Accuracy (argmax) and AUC of a row-major probability matrix.
EvalReport evaluate(std::span<const double> probs, std::size_t n_classes,
                    std::span<const Label> labels);

}  // namespace rrf
