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

// Brute-force reference computations shared by the unit tests and the
// acceptance checks.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rrf/growth.hpp"

namespace rrf::oracle {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::vector<std::uint32_t> subsets_of_size(unsigned n, unsigned f) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (static_cast<unsigned>(std::popcount(m)) == f) out.push_back(m);
  }
  return out;
}

struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};

// Fraction of f-subsets of u+v features touching one of the first u.
inline Ratio good_split_count(unsigned u, unsigned v, unsigned f) {
  const std::uint32_t important = (1u << u) - 1u;
  Ratio r{0, 0};
  for (std::uint32_t s : subsets_of_size(u + v, f)) {
    ++r.den;
    if (s & important) ++r.num;
  }
  return r;
}

// Fraction of ordered pairs of f-subsets of n features that intersect.
inline Ratio overlap_count(unsigned n, unsigned f) {
  const auto subsets = subsets_of_size(n, f);
  Ratio r{0, 0};
  for (std::uint32_t a : subsets) {
    for (std::uint32_t b : subsets) {
      ++r.den;
      if (a & b) ++r.num;
    }
  }
  return r;
}

// zeta(B) - eta_c(B) with B continuous.
inline double accuracy_model(double q, double t_av, double c, double b) {
  return strength(q, t_av, b) - correlation_accuracy_term(c, b);
}

inline double central_difference(double q, double t_av, double c, double b, double h) {
  return (accuracy_model(q, t_av, c, b + h) - accuracy_model(q, t_av, c, b - h)) / (2.0 * h);
}

// Probability that a random positive outscores a random negative; ties 1/2.
inline double pair_count_auc(std::span<const double> scores,
                             std::span<const unsigned char> positive) {
  std::uint64_t twice_wins = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) twice_wins += 2;
      else if (scores[i] == scores[j]) twice_wins += 1;
    }
  }
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pairs));
}

}  // namespace rrf::oracle
