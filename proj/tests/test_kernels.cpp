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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rrf/kernels.hpp"

namespace k = rrf::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("scalar kernels on small inputs") {
  const auto& s = k::scalar();
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y{4.0, -5.0, 6.0};
  CHECK(s.sum(x) == 6.0);
  CHECK(s.dot(x, y) == 12.0);
  std::vector<double> z = x;
  s.subtract(z, 2.0);
  CHECK(z == std::vector<double>{-1.0, 0.0, 1.0});
  s.accumulate(z, y);
  CHECK(z == std::vector<double>{3.0, -5.0, 7.0});
  CHECK(s.sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("active table is one of the known backends") {
  const auto& a = k::active();
  CHECK((a.backend == k::Backend::kScalar || a.backend == k::Backend::kAvx2));
  CHECK_FALSE(k::name(a.backend).empty());
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const k::Table* v = k::avx2();
  if (v == nullptr) {
    MESSAGE("AVX2 table unavailable; equivalence check skipped");
    return;
  }
  const auto& s = k::scalar();
  std::mt19937_64 rng(12);
  for (std::size_t n = 0; n <= 67; ++n) {
    CAPTURE(n);
    const auto x = random_vector(rng, n);
    const auto y = random_vector(rng, n);
    CHECK(close(v->sum(x), s.sum(x)));
    CHECK(close(v->dot(x, y), s.dot(x, y)));

    auto a = x, b = x;
    v->subtract(a, 0.375);
    s.subtract(b, 0.375);
    CHECK(a == b);

    auto c = x, d = x;
    v->accumulate(c, y);
    s.accumulate(d, y);
    CHECK(c == d);
  }
  for (std::size_t n : {1000u, 4099u}) {
    const auto x = random_vector(rng, n);
    const auto y = random_vector(rng, n);
    CHECK(std::abs(v->sum(x) - s.sum(x)) <= 1e-12 * n);
    CHECK(std::abs(v->dot(x, y) - s.dot(x, y)) <= 1e-12 * n);
  }
}
