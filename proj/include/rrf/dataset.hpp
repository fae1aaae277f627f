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
#include <span>
#include <string>
#include <vector>

namespace rrf {

using Label = std::uint32_t;
using FeatureIndex = std::uint32_t;
using FeatureList = std::vector<FeatureIndex>;

// Dense row-major numeric feature matrix with integer class labels.
class Dataset {
 public:
  Dataset() = default;

  // Validates shape, label range and feature-name uniqueness.
  Dataset(std::vector<double> values, std::vector<Label> labels,
          std::vector<std::string> feature_names,
          std::vector<std::string> class_names);

  std::size_t n_samples() const { return labels_.size(); }
  std::size_t n_features() const { return feature_names_.size(); }
  std::size_t n_classes() const { return class_names_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_features(), n_features()};
  }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * n_features() + j];
  }
  Label label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& values() const { return values_; }
  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::vector<std::string>& class_names() const { return class_names_; }

  // Rows in the given order; keeps feature and class metadata.
  Dataset select(std::span<const std::size_t> rows) const;

  std::vector<std::size_t> class_counts() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<double> values_;
  std::vector<Label> labels_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
};

// Comma-separated, header row first. Non-label columns become features in
// header order; labels are encoded by first appearance.
Dataset load_csv(const std::filesystem::path& path,
                 const std::string& label_column);

// Same parser over in-memory text.
Dataset parse_csv(const std::string& text, const std::string& label_column);

struct SplitSpec {
  double train_fraction = 0.6;
  double valid_fraction = 0.2;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitResult {
  Dataset train;
  Dataset valid;
  Dataset test;
  // Original row indices, ascending, one list per partition.
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> valid_rows;
  std::vector<std::size_t> test_rows;
};

// Per-class largest-remainder apportionment of `count` over `fractions`.
// Leftover units go to the largest fractional remainders; ties favour the
// earlier partition.
std::vector<std::size_t> apportion(std::size_t count,
                                   std::span<const double> fractions);

SplitResult stratified_split(const Dataset& ds, const SplitSpec& spec);

// Stratified row cap. Returns `ds` unchanged when it has at most `max_rows`
// rows; otherwise keeps a class-proportional subset in original row order.
Dataset subsample(const Dataset& ds, std::size_t max_rows, std::uint64_t seed);

}  // namespace rrf
