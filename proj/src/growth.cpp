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

#include "rrf/growth.hpp"

#include <cmath>
#include <limits>

#include "rrf/error.hpp"

namespace rrf {

namespace {

constexpr double kNuEpsilon = 1e-12;

double log_factorial(std::size_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// x^y with 0^0 = 1, matching std::pow.
double power(double x, double y) { return std::pow(x, y); }

// -base^exponent * ln(base), taken as 0 when base is 0 or 1.
double decay_slope(double base, double exponent) {
  if (base <= 0.0 || base >= 1.0) return 0.0;
  return -power(base, exponent) * std::log(base);
}

}  // namespace

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double good_split_prob(std::size_t u, std::size_t v, std::size_t f) {
  if (f == 0) fail(ErrorKind::kFNotPositive, "f must be >= 1");
  if (v < f || u + v < f) return 1.0;
  if (u == 0) return 0.0;
  return -std::expm1(log_binomial(v, f) - log_binomial(u + v, f));
}

QPartials q_partials(std::size_t u, std::size_t v, std::size_t f) {
  if (f == 0) fail(ErrorKind::kFNotPositive, "f must be >= 1");
  QPartials out;
  if (v < f || u + v <= f) return out;
  const std::size_t n = u + v;
  const double common = log_factorial(n - 1 - f) + std::log(static_cast<double>(f)) -
                        log_factorial(v - f);
  out.q_u = std::exp(log_factorial(v) + common - log_factorial(n));
  if (u > 0) {
    out.q_v = -std::exp(log_factorial(v - 1) + common +
                        std::log(static_cast<double>(u)) - log_factorial(n - 1) -
                        std::log(static_cast<double>(n)));
  }
  return out;
}

double strength(double q, double t_av, double b) {
  return 1.0 - power(1.0 - power(q, t_av), b);
}

Overlap pairwise_overlap_and_correlation(std::size_t u, std::size_t v,
                                         std::size_t f, double t_av) {
  if (f == 0) fail(ErrorKind::kFNotPositive, "f must be >= 1");
  const std::size_t n = u + v;
  Overlap out;
  if (n < 2 * f) {
    out.p = 1.0;
  } else {
    out.p = -std::expm1(log_binomial(n - f, f) - log_binomial(n, f));
  }
  out.c = power(out.p, t_av);
  out.degenerate = t_av == 0.0;
  return out;
}

double correlation_accuracy_term(double c, double b) {
  return 1.0 - power(1.0 - c, b / 2.0);
}

double growth_slope(double q, double t_av, double c, double b) {
  const double good_tree = power(q, t_av);
  return decay_slope(1.0 - good_tree, b) - 0.5 * decay_slope(1.0 - c, b / 2.0);
}

void GrowthParams::validate() const {
  if (f == 0) fail(ErrorKind::kFNotPositive, "f must be >= 1");
  if (b == 0) fail(ErrorKind::kInvalidConfig, "tree count must be >= 1");
  if (!(t_av >= 0.0) || !std::isfinite(t_av)) {
    fail(ErrorKind::kInvalidConfig, "t_av must be finite and >= 0");
  }
}

GrowthEvaluation evaluate_growth(const GrowthParams& params, std::size_t cap) {
  params.validate();
  GrowthEvaluation e;
  const double t = params.t_av;
  const double b = static_cast<double>(params.b);

  e.q = good_split_prob(params.u, params.v, params.f);
  const QPartials partials = q_partials(params.u, params.v, params.f);
  e.q_u = partials.q_u;
  e.q_v = partials.q_v;
  e.zeta = strength(e.q, t, b);
  const Overlap overlap = pairwise_overlap_and_correlation(params.u, params.v, params.f, t);
  e.p = overlap.p;
  e.c = overlap.c;
  e.eta_c = correlation_accuracy_term(e.c, b);
  e.nu = growth_slope(e.q, t, e.c, b);

  if (e.q <= 0.0 || e.q >= 1.0) {
    e.degenerate = true;
    return e;
  }
  e.l = b * t * power(e.q, t - 1.0) * power(1.0 - power(e.q, t), b - 1.0);

  const double change = e.l * (e.q_u * static_cast<double>(params.delta_u) +
                               e.q_v * static_cast<double>(params.delta_v));
  if (std::abs(e.nu) < kNuEpsilon) {
    e.degenerate = true;
    e.bound = change == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return e;
  }
  e.bound = std::abs(change / e.nu);
  if (std::isnan(e.bound)) {
    e.degenerate = true;
    return e;
  }
  if (e.bound <= 0.0) return e;
  if (e.bound > static_cast<double>(cap) + 1.0) {
    e.delta_b = cap;
  } else {
    e.delta_b = static_cast<std::size_t>(std::ceil(e.bound)) - 1;
    if (e.delta_b > cap) e.delta_b = cap;
  }
  return e;
}

}  // namespace rrf
