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

#include <span>
#include <string_view>

// Dense double-precision reductions used by the correlation and voting
// paths. A scalar reference table is always available; an AVX2 table is
// selected at runtime when the CPU supports it. Set RRF_KERNELS=scalar to
// force the reference path.
namespace rrf::kernels {

enum class Backend { kScalar, kAvx2 };

struct Table {
  Backend backend;
  double (*sum)(std::span<const double> x);
  double (*dot)(std::span<const double> x, std::span<const double> y);
  // x[i] -= shift
  void (*subtract)(std::span<double> x, double shift);
  // acc[i] += x[i]
  void (*accumulate)(std::span<double> acc, std::span<const double> x);
};

const Table& scalar();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const Table* avx2();

// Table chosen once per process.
const Table& active();

std::string_view name(Backend backend);

inline double sum(std::span<const double> x) { return active().sum(x); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x, y);
}
inline void subtract(std::span<double> x, double shift) {
  active().subtract(x, shift);
}
inline void accumulate(std::span<double> acc, std::span<const double> x) {
  active().accumulate(acc, x);
}

}  // namespace rrf::kernels
