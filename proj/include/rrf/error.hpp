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

#include <stdexcept>
#include <string>

namespace rrf {

enum class ErrorKind {
  // data
  kMissingLabelColumn,
  kNonNumericFeature,
  kEmptyDataset,
  kSingleClass,
  kClassTooSmall,
  kIo,
  // tree / metrics
  kAllZeroCounts,
  kInconsistentCounts,
  kPureParent,
  kEmptySample,
  kFNotPositive,
  kDimensionMismatch,
  kLengthMismatch,
  kSingleClassPresent,
  kNoValidClass,
  // refine
  kEmptyPool,
  kEmptyImportantPool,
  kOverlapViolation,
  kEmptyFeatureSet,
  // harness
  kInvalidConfig,
  kInvariantViolation,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace rrf
