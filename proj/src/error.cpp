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

#include "rrf/error.hpp"

namespace rrf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingLabelColumn: return "MissingLabelColumn";
    case ErrorKind::kNonNumericFeature: return "NonNumericFeature";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
    case ErrorKind::kSingleClass: return "SingleClass";
    case ErrorKind::kClassTooSmall: return "ClassTooSmall";
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kAllZeroCounts: return "AllZeroCounts";
    case ErrorKind::kInconsistentCounts: return "InconsistentCounts";
    case ErrorKind::kPureParent: return "PureParent";
    case ErrorKind::kEmptySample: return "EmptySample";
    case ErrorKind::kFNotPositive: return "FNotPositive";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kSingleClassPresent: return "SingleClassPresent";
    case ErrorKind::kNoValidClass: return "NoValidClass";
    case ErrorKind::kEmptyPool: return "EmptyPool";
    case ErrorKind::kEmptyImportantPool: return "EmptyImportantPool";
    case ErrorKind::kOverlapViolation: return "OverlapViolation";
    case ErrorKind::kEmptyFeatureSet: return "EmptyFeatureSet";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace rrf
