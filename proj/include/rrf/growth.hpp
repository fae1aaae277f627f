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

// Analytic model for how many trees to add after a feature-pool update.
// u = |important pool|, v = |unimportant pool|, f = features drawn per node,
// t_av = mean internal nodes per tree, b = current tree count.
namespace rrf {

inline constexpr std::size_t kDefaultDeltaBCap = 50;

/// ln C(n, k); -inf when k > n.
double log_binomial(std::size_t n, std::size_t k);

/// Probability that an f-subset of u+v features contains at least one of
/// the u important ones. 1 when v < f or u + v < f.
double good_split_prob(std::size_t u, std::size_t v, std::size_t f);

struct QPartials {
  double q_u = 0.0;
  double q_v = 0.0;
};

/// Discrete sensitivities of good_split_prob to u and v. Both are zero when
/// v < f or u + v <= f.
QPartials q_partials(std::size_t u, std::size_t v, std::size_t f);

/// zeta = 1 - (1 - q^t_av)^b. `b` is continuous so the derivative can be
/// probed numerically.
double strength(double q, double t_av, double b);

struct Overlap {
  double p = 0.0;  // two f-subsets share a feature
  double c = 0.0;  // p^t_av
  bool degenerate = false;  // t_av == 0
};

Overlap pairwise_overlap_and_correlation(std::size_t u, std::size_t v,
                                         std::size_t f, double t_av);

/// eta_c = 1 - (1 - c)^(b/2).
double correlation_accuracy_term(double c, double b);

/// d(zeta - eta_c)/db in closed form; terms whose base is 0 contribute 0.
double growth_slope(double q, double t_av, double c, double b);

struct GrowthParams {
  std::size_t u = 0;
  std::size_t v = 0;
  std::size_t f = 1;
  double t_av = 0.0;
  std::size_t b = 1;
  std::int64_t delta_u = 0;
  std::int64_t delta_v = 0;

  void validate() const;
};

struct GrowthEvaluation {
  double q = 0.0;
  double q_u = 0.0;
  double q_v = 0.0;
  double zeta = 0.0;
  double p = 0.0;
  double c = 0.0;
  double eta_c = 0.0;
  double l = 0.0;
  double nu = 0.0;
  double bound = 0.0;
  std::size_t delta_b = 0;
  // q at 0 or 1, nu ~ 0, or a NaN bound; delta_b is then 0.
  bool degenerate = false;
};

/// Evaluates every intermediate and the admissible tree increment: the
/// largest non-negative integer strictly below
/// |l (q_u du + q_v dv) / nu|, capped at `cap`.
GrowthEvaluation evaluate_growth(const GrowthParams& params,
                                 std::size_t cap = kDefaultDeltaBCap);

inline std::size_t delta_b(const GrowthParams& params,
                           std::size_t cap = kDefaultDeltaBCap) {
  return evaluate_growth(params, cap).delta_b;
}

}  // namespace rrf
