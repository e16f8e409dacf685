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

#ifndef CCT_PHILOX_HPP_
#define CCT_PHILOX_HPP_

#include <array>
#include <cstdint>

namespace cct {

// Identifies one random stream. Every random sequence in the library is a
// pure function of this triple, so results never depend on thread count or
// scheduling order.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t experiment_id = 0;
  std::uint64_t replicate_index = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t* hi,
                      std::uint32_t* lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  *hi = static_cast<std::uint32_t>(p >> 32);
  *lo = static_cast<std::uint32_t>(p);
}

// One full 10-round bijection on a 128-bit counter under a 64-bit key.
inline std::array<std::uint32_t, 4> philox4x32_10(
    std::array<std::uint32_t, 4> x, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo32(0xD2511F53u, x[0], &hi0, &lo0);
    mulhilo32(0xCD9E8D57u, x[2], &hi1, &lo1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    k[0] += 0x9E3779B9u;
    k[1] += 0xBB67AE85u;
  }
  return x;
}

}  // namespace detail

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// The 128-bit counter is laid out as (replicate_index, block_index); the
// 64-bit key is a hash of (master_seed, experiment_id). Distinct stream
// triples therefore yield disjoint counter/key pairs.
class Philox {
 public:
  explicit Philox(const RngStream& s)
      : c0_(static_cast<std::uint32_t>(s.replicate_index)),
        c1_(static_cast<std::uint32_t>(s.replicate_index >> 32)),
        block_(0) {
    std::uint64_t k =
        detail::splitmix64(detail::splitmix64(s.master_seed) ^ s.experiment_id);
    k0_ = static_cast<std::uint32_t>(k);
    k1_ = static_cast<std::uint32_t>(k >> 32);
  }

  // Generates the next block of four 32-bit words.
  std::array<std::uint32_t, 4> next_block() {
    std::array<std::uint32_t, 4> ctr = {
        c0_, c1_, static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32)};
    ++block_;
    return detail::philox4x32_10(ctr, {k0_, k1_});
  }

  std::uint64_t next_u64() {
    if (have_ == 0) {
      buf_ = next_block();
      have_ = 2;
    }
    --have_;
    std::uint32_t lo = buf_[2 * have_];
    std::uint32_t hi = buf_[2 * have_ + 1];
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1): midpoints of 2^52 equal cells, never 0 or 1.
  double next_double_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (-n) % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x < threshold);
    return x % n;
  }

 private:
  std::uint32_t c0_, c1_;
  std::uint64_t block_;
  std::uint32_t k0_, k1_;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

}  // namespace cct

#endif  // CCT_PHILOX_HPP_
