// Copyright 2026 The poetry-dp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POETRY_DP_CORE_RNG_H_
#define POETRY_DP_CORE_RNG_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>

namespace poetry_dp {

// Philox4x32-10 block function (Salmon et al., SC'11). Exposed for testing
// against the published known-answer vectors.
std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// SplitMix64 finalizer; used to fold identifiers into stream ids.
uint64_t Mix64(uint64_t x);

// Folds a sequence of identifiers (seed, query index, token index, ...) into
// one 64-bit stream id. Order-sensitive.
uint64_t CombineIds(std::initializer_list<uint64_t> ids);

// FNV-1a 64 over raw bytes; stable across platforms.
uint64_t HashBytes(const std::string& bytes);

// Counter-based random stream keyed by (seed, stream id). The i-th draw is a
// pure function of (seed, stream, i), so work can be split across threads or
// reordered without changing results. One instance must be used by one task
// at a time; hand out Derive()d children instead of sharing.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }
  uint64_t position() const { return counter_; }

  // Independent child stream identified by `tag`.
  RngStream Derive(uint64_t tag) const {
    return RngStream(seed_, CombineIds({stream_, tag}));
  }

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on the open interval (0, 1).
  double UniformOpen();
  // Uniform integer in [0, n); n must be > 0.
  uint64_t UniformInt(uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }
  // Standard normal via Box-Muller.
  double Normal();
  // Standard Gumbel, -log(-log U).
  double Gumbel();

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t counter_ = 0;
  std::array<uint32_t, 4> block_{};
  int block_used_ = 2;  // 64-bit halves consumed from block_
  std::optional<double> spare_normal_;
};

}  // namespace poetry_dp

#endif  // POETRY_DP_CORE_RNG_H_
