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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "cct/philox.hpp"
#include "cct/sampling.hpp"

using namespace cct;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 distribution (Salmon et al.).
  auto zeros = detail::philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(zeros[0] == 0x6627e8d5u);
  CHECK(zeros[1] == 0xe169c58du);
  CHECK(zeros[2] == 0xbc57ac4cu);
  CHECK(zeros[3] == 0x9b00dbd8u);

  auto pi_digits = detail::philox4x32_10(
      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
      {0xa4093822u, 0x299f31d0u});
  CHECK(pi_digits[0] == 0xd16cfe09u);
  CHECK(pi_digits[1] == 0x94fdccebu);
  CHECK(pi_digits[2] == 0x5001e420u);
  CHECK(pi_digits[3] == 0x24126ea1u);
}

TEST_CASE("splitmix64 reference outputs") {
  CHECK(detail::splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(detail::splitmix64(1) == 0x910A2DEC89025CC1ull);
  CHECK(detail::splitmix64(0x123456789ABCDEFull) == 0x157A3807A48FAA9Dull);
}

TEST_CASE("identical streams replay identically") {
  Philox a(RngStream{123, 456, 789});
  Philox b(RngStream{123, 456, 789});
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("changing any stream coordinate changes the sequence") {
  RngStream base{123, 456, 789};
  std::vector<RngStream> variants{
      {124, 456, 789}, {123, 457, 789}, {123, 456, 790}};
  Philox ref(base);
  std::array<std::uint64_t, 8> head{};
  for (auto& h : head) h = ref.next_u64();
  for (const RngStream& s : variants) {
    Philox other(s);
    bool all_equal = true;
    for (auto h : head) {
      if (other.next_u64() != h) all_equal = false;
    }
    CHECK_FALSE(all_equal);
  }
}

TEST_CASE("uniform outputs stay inside their intervals") {
  Philox rng(RngStream{88, 0, 0});
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(lo < 1e-3);
  CHECK(hi > 1.0 - 1e-3);

  Philox rng2(RngStream{88, 1, 0});
  for (int i = 0; i < n; ++i) {
    double u = rng2.next_double_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("next_below is unbiased across small moduli") {
  Philox rng(RngStream{2, 2, 2});
  const std::uint64_t n = 6;
  const int draws = 60000;
  std::array<int, 6> counts{};
  for (int i = 0; i < draws; ++i) {
    std::uint64_t v = rng.next_below(n);
    CHECK(v < n);
    ++counts[v];
  }
  for (int c : counts) {
    CHECK(std::fabs(c - draws / 6.0) < 400.0);  // ~4.4 binomial SDs
  }
}

TEST_CASE("normal moments") {
  Sampler sampler(RngStream{77, 0, 0});
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0;
  double prev = 0.0;
  bool repeated = false;
  for (int i = 0; i < n; ++i) {
    double x = sampler.normal();
    if (i > 0 && x == prev) repeated = true;
    prev = x;
    sum += x;
    sum2 += x * x;
    sum3 += x * x * x;
  }
  CHECK_FALSE(repeated);  // the cached spare must not echo draws
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - 1.0) < 0.02);
  CHECK(std::fabs(sum3 / n) < 0.05);
}

TEST_CASE("exponential moments") {
  Sampler sampler(RngStream{77, 1, 0});
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = sampler.exponential();
    CHECK(x >= 0.0);
    sum += x;
    sum2 += x * x;
  }
  double mean = sum / n;
  CHECK(std::fabs(mean - 1.0) < 0.01);
  CHECK(std::fabs(sum2 / n - mean * mean - 1.0) < 0.05);
}

TEST_CASE("gamma moments across shape regimes") {
  for (double alpha : {0.3, 0.5, 1.0, 2.7, 10.0}) {
    Sampler sampler(RngStream{77, 2, static_cast<std::uint64_t>(alpha * 10)});
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = sampler.gamma(alpha);
      CHECK(x > 0.0);
      sum += x;
      sum2 += x * x;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK_MESSAGE(std::fabs(mean - alpha) < 0.05 * alpha + 0.01, "alpha = ",
                  alpha);
    CHECK_MESSAGE(std::fabs(var - alpha) < 0.08 * alpha + 0.02, "alpha = ",
                  alpha);
  }
}

TEST_CASE("chi-square moments") {
  Sampler sampler(RngStream{77, 3, 0});
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = sampler.chi_square(4.0);
    sum += x;
    sum2 += x * x;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean - 4.0) < 0.05);
  CHECK(std::fabs(var - 8.0) < 0.3);
}

TEST_CASE("dirichlet uniform weights") {
  Sampler sampler(RngStream{77, 4, 0});
  const std::size_t k = 7;
  const int n = 20000;
  std::vector<double> w(k), mean(k, 0.0);
  for (int i = 0; i < n; ++i) {
    sampler.dirichlet_uniform(k, w.data());
    double sum = 0.0;
    for (double v : w) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
    for (std::size_t j = 0; j < k; ++j) mean[j] += w[j];
  }
  for (std::size_t j = 0; j < k; ++j) {
    CHECK(std::fabs(mean[j] / n - 1.0 / k) < 0.005);
  }
}

TEST_CASE("sample_indices draws distinct positions uniformly") {
  Sampler sampler(RngStream{77, 5, 0});
  const std::uint64_t d = 10, s = 3;
  const int n = 30000;
  std::vector<std::uint32_t> idx;
  std::array<int, 10> counts{};
  for (int i = 0; i < n; ++i) {
    sampler.sample_indices(d, s, &idx);
    CHECK(idx.size() == s);
    std::set<std::uint32_t> uniq(idx.begin(), idx.end());
    CHECK(uniq.size() == s);
    for (std::uint32_t v : idx) {
      CHECK(v < d);
      ++counts[v];
    }
  }
  for (int c : counts) {
    CHECK(std::fabs(c - n * 0.3) < 500.0);
  }

  sampler.sample_indices(5, 5, &idx);
  std::set<std::uint32_t> all(idx.begin(), idx.end());
  CHECK(all.size() == 5);
  CHECK(*all.rbegin() == 4);
}

TEST_CASE("samplers with equal streams agree draw for draw") {
  Sampler a(RngStream{1, 2, 3});
  Sampler b(RngStream{1, 2, 3});
  for (int i = 0; i < 50; ++i) {
    CHECK(a.normal() == b.normal());
    CHECK(a.gamma(2.0) == b.gamma(2.0));
    CHECK(a.uniform() == b.uniform());
  }
}
