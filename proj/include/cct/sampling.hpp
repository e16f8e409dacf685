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

#ifndef CCT_SAMPLING_HPP_
#define CCT_SAMPLING_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "cct/errors.hpp"
#include "cct/philox.hpp"

namespace cct {

// Distribution sampler over one Philox stream. All algorithms are fixed for
// the life of the project: the bit-for-bit output of a given RngStream is
// part of the reproducibility contract, so no standard-library distribution
// (whose stream layout may change between releases) is used.
class Sampler {
 public:
  explicit Sampler(const RngStream& s) : rng_(s) {}

  double uniform() { return rng_.next_double(); }        // [0, 1)
  double uniform_open() { return rng_.next_double_open(); }  // (0, 1)

  std::uint64_t uniform_below(std::uint64_t n) { return rng_.next_below(n); }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - rng_.next_double();  // (0, 1]
    double u2 = rng_.next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.28318530717958647693 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double exponential() { return -std::log(1.0 - rng_.next_double()); }

  // Marsaglia-Tsang squeeze method; boosting handles alpha < 1.
  double gamma(double alpha) {
    if (!(alpha > 0.0)) throw domain_error("gamma: alpha must be positive");
    if (alpha < 1.0) {
      double u = rng_.next_double_open();
      return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    double d = alpha - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = rng_.next_double_open();
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_square(double nu) { return 2.0 * gamma(0.5 * nu); }

  // Dirichlet(1, ..., 1): normalized unit exponentials.
  void dirichlet_uniform(std::size_t k, double* out) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = exponential();
      sum += out[i];
    }
    for (std::size_t i = 0; i < k; ++i) out[i] /= sum;
  }

  // Draws s distinct indices from {0, ..., d-1} (Floyd's algorithm).
  void sample_indices(std::uint64_t d, std::uint64_t s,
                      std::vector<std::uint32_t>* out) {
    if (s > d) throw config_error("sample_indices: s exceeds d");
    out->clear();
    for (std::uint64_t j = d - s; j < d; ++j) {
      std::uint64_t t = rng_.next_below(j + 1);
      bool seen = false;
      for (std::uint32_t v : *out) {
        if (v == t) {
          seen = true;
          break;
        }
      }
      out->push_back(static_cast<std::uint32_t>(seen ? j : t));
    }
  }

 private:
  Philox rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cct

#endif  // CCT_SAMPLING_HPP_
