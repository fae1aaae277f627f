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

#include "rrf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rrf/error.hpp"
#include "rrf/seed.hpp"

namespace rrf {

Dataset::Dataset(std::vector<double> values, std::vector<Label> labels,
                 std::vector<std::string> feature_names,
                 std::vector<std::string> class_names)
    : values_(std::move(values)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
  if (values_.size() != labels_.size() * feature_names_.size()) {
    fail(ErrorKind::kDimensionMismatch,
         "value count does not match rows x features");
  }
  if (class_names_.size() < 2) {
    fail(ErrorKind::kSingleClass, "need at least two classes");
  }
  for (Label y : labels_) {
    if (y >= class_names_.size()) {
      fail(ErrorKind::kDimensionMismatch,
           "label " + std::to_string(y) + " out of range");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names_) {
    if (!seen.insert(name).second) {
      fail(ErrorKind::kInvalidConfig, "duplicate feature name '" + name + "'");
    }
  }
}

Dataset Dataset::select(std::span<const std::size_t> rows) const {
  Dataset out;
  const std::size_t d = n_features();
  out.values_.reserve(rows.size() * d);
  out.labels_.reserve(rows.size());
  for (std::size_t r : rows) {
    auto src = row(r);
    out.values_.insert(out.values_.end(), src.begin(), src.end());
    out.labels_.push_back(labels_[r]);
  }
  out.feature_names_ = feature_names_;
  out.class_names_ = class_names_;
  return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(n_classes(), 0);
  for (Label y : labels_) ++counts[y];
  return counts;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

bool parse_number(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& label_column) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  bool have_header = false;
  std::size_t label_col = 0;

  std::vector<double> values;
  std::vector<Label> labels;
  std::vector<std::string> class_names;
  std::unordered_map<std::string, Label> class_ids;
  std::size_t line_no = 0;
  std::size_t row_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_record(line);
    if (!have_header) {
      header = std::move(fields);
      auto it = std::find(header.begin(), header.end(), label_column);
      if (it == header.end()) {
        fail(ErrorKind::kMissingLabelColumn,
             "no column named '" + label_column + "'");
      }
      label_col = static_cast<std::size_t>(it - header.begin());
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      fail(ErrorKind::kNonNumericFeature,
           "line " + std::to_string(line_no) + " has " +
               std::to_string(fields.size()) + " fields, expected " +
               std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_col) continue;
      double v = 0.0;
      if (!parse_number(fields[c], v)) {
        fail(ErrorKind::kNonNumericFeature,
             "row " + std::to_string(row_no) + ", column '" + header[c] +
                 "': '" + fields[c] + "'");
      }
      values.push_back(v);
    }
    const std::string& cls = fields[label_col];
    auto [it, inserted] =
        class_ids.try_emplace(cls, static_cast<Label>(class_names.size()));
    if (inserted) class_names.push_back(cls);
    labels.push_back(it->second);
    ++row_no;
  }
  if (!have_header) fail(ErrorKind::kEmptyDataset, "no header row");
  if (labels.empty()) fail(ErrorKind::kEmptyDataset, "no data rows");
  if (class_names.size() < 2) {
    fail(ErrorKind::kSingleClass,
         "label column '" + label_column + "' has a single class");
  }

  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) feature_names.push_back(header[c]);
  }
  return Dataset(std::move(values), std::move(labels), std::move(feature_names),
                 std::move(class_names));
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), label_column);
}

// ---------------------------------------------------------------------------
// Splitting

void SplitSpec::validate() const {
  for (double f : {train_fraction, valid_fraction, test_fraction}) {
    if (!(f > 0.0 && f < 1.0)) {
      fail(ErrorKind::kInvalidConfig, "split fractions must lie in (0,1)");
    }
  }
  if (std::abs(train_fraction + valid_fraction + test_fraction - 1.0) > 1e-9) {
    fail(ErrorKind::kInvalidConfig, "split fractions must sum to 1");
  }
}

std::vector<std::size_t> apportion(std::size_t count,
                                   std::span<const double> fractions) {
  const std::size_t k = fractions.size();
  std::vector<std::size_t> out(k);
  std::vector<double> remainder(k);
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < k; ++p) {
    const double quota = fractions[p] * static_cast<double>(count);
    out[p] = static_cast<std::size_t>(std::floor(quota));
    remainder[p] = quota - std::floor(quota);
    assigned += out[p];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t i = 0; assigned < count; ++i, ++assigned) {
    ++out[order[i % k]];
  }
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& ds) {
  std::vector<std::vector<std::size_t>> by_class(ds.n_classes());
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    by_class[ds.label(i)].push_back(i);
  }
  return by_class;
}

}  // namespace

SplitResult stratified_split(const Dataset& ds, const SplitSpec& spec) {
  spec.validate();
  auto by_class = rows_by_class(ds);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].size() < 3) {
      fail(ErrorKind::kClassTooSmall,
           "class " + std::to_string(c) + " has " +
               std::to_string(by_class[c].size()) + " samples");
    }
  }

  const double fractions[] = {spec.train_fraction, spec.valid_fraction,
                              spec.test_fraction};
  std::vector<std::size_t> parts[3];
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    Rng rng(derive_seed(spec.seed, c));
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto sizes = apportion(rows.size(), fractions);
    auto it = rows.begin();
    for (int p = 0; p < 3; ++p) {
      parts[p].insert(parts[p].end(), it, it + static_cast<std::ptrdiff_t>(sizes[p]));
      it += static_cast<std::ptrdiff_t>(sizes[p]);
    }
  }
  for (auto& p : parts) std::sort(p.begin(), p.end());

  SplitResult out;
  out.train = ds.select(parts[0]);
  out.valid = ds.select(parts[1]);
  out.test = ds.select(parts[2]);
  out.train_rows = std::move(parts[0]);
  out.valid_rows = std::move(parts[1]);
  out.test_rows = std::move(parts[2]);
  return out;
}

Dataset subsample(const Dataset& ds, std::size_t max_rows, std::uint64_t seed) {
  if (ds.n_samples() <= max_rows) return ds;
  auto by_class = rows_by_class(ds);
  std::vector<double> shares;
  for (const auto& rows : by_class) {
    shares.push_back(static_cast<double>(rows.size()) /
                     static_cast<double>(ds.n_samples()));
  }
  const auto quotas = apportion(max_rows, shares);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    Rng rng(derive_seed(seed, c));
    std::shuffle(rows.begin(), rows.end(), rng);
    const std::size_t take = std::min(quotas[c], rows.size());
    keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(keep.begin(), keep.end());
  return ds.select(keep);
}

}  // namespace rrf
