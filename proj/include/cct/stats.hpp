// Copyright 2026 The cct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCT_STATS_HPP_
#define CCT_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "cct/errors.hpp"
#include "cct/special.hpp"

namespace cct {

inline constexpr double kPi = 3.14159265358979323846;

// Smallest/largest p-values representable without losing the open interval.
inline constexpr double kPvalueFloor = 0x1.0p-53;
inline constexpr double kPvalueCeil = 1.0 - 0x1.0p-53;

namespace detail {

// cot(pi*q) for q in (0, 0.5]. The reciprocal form is used on (0, 0.25]
// where the direct tangent of (0.5 - q)*pi loses relative precision; on
// (0.25, 0.5] the subtraction 0.5 - q is exact and the tangent is tame.
inline double cot_pi(double q) {
  if (q <= 0.25) return 1.0 / std::tan(kPi * q);
  return std::tan((0.5 - q) * kPi);
}

inline double neumaier_add(double sum, double term, double* comp) {
  double t = sum + term;
  if (std::fabs(sum) >= std::fabs(term)) {
    *comp += (sum - t) + term;
  } else {
    *comp += (term - t) + sum;
  }
  return t;
}

}  // namespace detail

// Maps a p-value to a standard Cauchy variable: tan((0.5 - p) * pi).
// Monotone decreasing; small p gives a large positive value. With clamp set,
// boundary inputs 0 and 1 are pulled to the nearest representable interior
// points before transforming.
inline double cauchy_transform(double p, bool clamp = false) {
  if (clamp && p >= 0.0 && p <= 1.0) {
    p = std::min(std::max(p, kPvalueFloor), kPvalueCeil);
  }
  if (!(p > 0.0 && p < 1.0)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", p);
    throw domain_error(std::string("p-value ") + buf +
                       " lies outside the open interval (0,1)");
  }
  if (p == 0.5) return 0.0;
  if (p < 0.5) return detail::cot_pi(p);
  return -detail::cot_pi(1.0 - p);
}

// Upper-alpha quantile of the standard Cauchy distribution.
inline double cauchy_upper_quantile(double alpha) {
  return cauchy_transform(alpha);
}

inline double cauchy_cdf(double x) { return 0.5 + std::atan(x) / kPi; }

// Validated p-value vector with nonnegative weights summing to one.
struct PValueVector {
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const { return values.size(); }
};

// Builds a PValueVector. Empty weights mean equal weights 1/d. Throws
// domain_error for out-of-domain values or a bad weight sum, config_error
// for a length mismatch.
inline PValueVector make_pvalues(std::vector<double> values,
                                 std::vector<double> weights = {},
                                 bool clamp = false) {
  if (values.empty()) throw config_error("p-value vector must be non-empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    double p = values[i];
    if (clamp && p >= 0.0 && p <= 1.0) {
      p = std::min(std::max(p, kPvalueFloor), kPvalueCeil);
      values[i] = p;
    }
    if (!(p > 0.0 && p < 1.0)) {
      throw domain_error("p-value at index " + std::to_string(i) +
                         " must lie strictly in (0,1)");
    }
  }
  if (weights.empty()) {
    weights.assign(values.size(), 1.0 / static_cast<double>(values.size()));
  } else {
    if (weights.size() != values.size()) {
      throw config_error("weight vector length does not match p-value count");
    }
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
        throw domain_error("weight at index " + std::to_string(i) +
                           " must be finite and nonnegative");
      }
      sum = detail::neumaier_add(sum, weights[i], &comp);
    }
    if (std::fabs(sum + comp - 1.0) > 1e-12) {
      throw domain_error("weights must sum to 1 within 1e-12");
    }
  }
  return PValueVector{std::move(values), std::move(weights)};
}

// Weighted sum of Cauchy-transformed p-values (compensated summation).
inline double cct_statistic(const PValueVector& pv) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < pv.values.size(); ++i) {
    sum = detail::neumaier_add(sum, pv.weights[i] * cauchy_transform(pv.values[i]),
                               &comp);
  }
  return sum + comp;
}

// Standard Cauchy upper tail of the combined statistic: 0.5 - arctan(t)/pi,
// evaluated through arctan(1/t) in the tails so tiny p-values keep full
// relative precision.
inline double cct_pvalue(double t) {
  if (!std::isfinite(t)) {
    throw domain_error("cct_pvalue: statistic must be finite");
  }
  double p;
  if (t > 1.0) {
    p = std::atan(1.0 / t) / kPi;
  } else if (t < -1.0) {
    p = 1.0 + std::atan(1.0 / t) / kPi;
  } else {
    p = 0.5 - std::atan(t) / kPi;
  }
  return std::min(std::max(p, 5e-324), kPvalueCeil);
}

struct CombinedResult {
  std::string method;
  int d = 0;
  double statistic = 0.0;
  double p_value = 0.0;
};

inline CombinedResult cct_combine(const PValueVector& pv) {
  double t = cct_statistic(pv);
  return CombinedResult{"CCT", static_cast<int>(pv.size()), t, cct_pvalue(t)};
}

// Converts z-scores to two-sided normal p-values with equal weights.
// Results are floored at 1e-300: beyond |z| ~ 38.6 the two-sided tail
// underflows to zero, which is not a valid p-value.
inline PValueVector zscores_to_pvalues(const std::vector<double>& z) {
  std::vector<double> p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) {
      throw domain_error("z-score at index " + std::to_string(i) +
                         " must be finite");
    }
    p[i] = std::min(std::max(normal_sf2(z[i]), 1e-300), kPvalueCeil);
  }
  return make_pvalues(std::move(p));
}

// Minimum p-value statistic; weights are ignored by design.
inline double minp_statistic(const std::vector<double>& values) {
  if (values.empty()) throw config_error("p-value vector must be non-empty");
  return *std::min_element(values.begin(), values.end());
}

// Sidak-adjusted p-value for the minimum of d independent p-values.
inline double minp_pvalue_independent(double pmin, int d) {
  if (!(pmin > 0.0 && pmin < 1.0)) {
    throw domain_error("minp_pvalue_independent: p must lie in (0,1)");
  }
  if (d < 1) throw config_error("minp_pvalue_independent: d must be positive");
  return -std::expm1(static_cast<double>(d) * std::log1p(-pmin));
}

inline CombinedResult minp_combine_independent(const PValueVector& pv) {
  double pmin = minp_statistic(pv.values);
  return CombinedResult{"MinP", static_cast<int>(pv.size()), pmin,
                        minp_pvalue_independent(pmin, static_cast<int>(pv.size()))};
}

namespace detail {

// Higher criticism on an ascending p-value array.
inline double hc_sorted(const double* p, std::size_t d) {
  std::size_t h = std::max<std::size_t>(1, d / 2);
  double dd = static_cast<double>(d);
  double sqrt_d = std::sqrt(dd);
  double best_win = -std::numeric_limits<double>::infinity();
  double best_all = best_win;
  for (std::size_t i = 1; i <= h; ++i) {
    double pi = p[i - 1];
    double term = sqrt_d * (static_cast<double>(i) / dd - pi) /
                  std::sqrt(pi * (1.0 - pi));
    best_all = std::max(best_all, term);
    if (pi >= 1.0 / dd && pi <= 0.5) best_win = std::max(best_win, term);
  }
  return std::isinf(best_win) ? best_all : best_win;
}

// Bernoulli Kullback-Leibler divergence K(a, p).
inline double bernoulli_kl(double a, double p) {
  double first = a * std::log(a / p);
  if (a >= 1.0) return first;
  return first + (1.0 - a) * std::log((1.0 - a) / (1.0 - p));
}

// Berk-Jones on an ascending p-value array.
inline double bj_sorted(const double* p, std::size_t d) {
  std::size_t h = std::max<std::size_t>(1, d / 2);
  double dd = static_cast<double>(d);
  double best = 0.0;
  for (std::size_t i = 1; i <= h; ++i) {
    double a = static_cast<double>(i) / dd;
    if (p[i - 1] < a) best = std::max(best, dd * bernoulli_kl(a, p[i - 1]));
  }
  return best;
}

}  // namespace detail

// Higher criticism over the first max(1, d/2) order statistics, restricted
// to the window 1/d <= p_(i) <= 1/2; when no order statistic falls in the
// window the maximum is taken over the same index range without it.
inline double hc_statistic(std::vector<double> values) {
  if (values.size() < 2) {
    throw config_error("higher criticism needs at least two p-values");
  }
  std::sort(values.begin(), values.end());
  return detail::hc_sorted(values.data(), values.size());
}

// Berk-Jones over the first max(1, d/2) order statistics: the largest
// d*K(i/d, p_(i)) among indices with p_(i) < i/d, zero when none qualify.
inline double bj_statistic(std::vector<double> values) {
  if (values.size() < 2) {
    throw config_error("Berk-Jones needs at least two p-values");
  }
  std::sort(values.begin(), values.end());
  return detail::bj_sorted(values.data(), values.size());
}

// One-sample Kolmogorov-Smirnov statistic against the standard Cauchy law.
inline double ks_statistic_cauchy(std::vector<double> sample) {
  if (sample.empty()) throw config_error("KS sample must be non-empty");
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d_stat = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cauchy_cdf(sample[i]);
    double hi = static_cast<double>(i + 1) / n - f;
    double lo = f - static_cast<double>(i) / n;
    d_stat = std::max(d_stat, std::max(hi, lo));
  }
  return d_stat;
}

// Asymptotic one-sample KS critical value at the given level.
inline double ks_critical_value(double alpha, std::size_t n) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace cct

#endif  // CCT_STATS_HPP_
