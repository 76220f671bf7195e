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

#ifndef POETRY_DP_EXPERTS_PROVIDER_H_
#define POETRY_DP_EXPERTS_PROVIDER_H_

#include <atomic>
#include <cstdint>
#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "poetry_dp/core/types.h"

namespace poetry_dp {

struct ProviderDescriptor {
  std::string name;
  // Engine must not issue concurrent calls.
  bool serial = false;
  // Outputs may differ between identical calls; disables request caching.
  bool stochastic = false;
};

// The frozen language model: returns next-token log-probs over the provider's
// vocabulary given the tokens generated so far, the query, and some context.
//
// Query() conditions on one clipping group (one or more examples; payloads
// are presented in group order). FullContext() conditions on an arbitrary
// example list, possibly empty for a zero-shot call, and backs the
// non-private and subsampling baselines.
//
// Both entry points validate the implementation's output (arity, finiteness,
// round-off tolerance) and count calls, so every provider obeys the same
// output contract.
class ExpertProvider {
 public:
  virtual ~ExpertProvider() = default;

  absl::StatusOr<LogProbVector> Query(std::span<const Token> prefix,
                                      const std::string& query,
                                      std::span<const ContextExample> group);

  absl::StatusOr<LogProbVector> FullContext(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> examples);

  virtual const Vocabulary& vocabulary() const = 0;
  virtual ProviderDescriptor descriptor() const = 0;

  uint64_t query_calls() const { return query_calls_.load(); }
  uint64_t full_context_calls() const { return full_context_calls_.load(); }
  void ResetCounters() {
    query_calls_ = 0;
    full_context_calls_ = 0;
  }

 protected:
  // Raw (unvalidated) log-probs aligned with vocabulary().
  virtual absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> group) = 0;
  virtual absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> examples) = 0;

 private:
  absl::StatusOr<LogProbVector> Check(absl::StatusOr<std::vector<double>> raw);

  std::atomic<uint64_t> query_calls_{0};
  std::atomic<uint64_t> full_context_calls_{0};
};

// Stable 64-bit digest of a call's inputs, for providers that derive
// pseudo-random but deterministic outputs per call.
uint64_t DigestCall(std::span<const Token> prefix, const std::string& query,
                    std::span<const ContextExample> examples);

// Concatenated payloads of a group in order, separated by blank lines.
std::string JoinPayloads(std::span<const ContextExample> examples);

}  // namespace poetry_dp

#endif  // POETRY_DP_EXPERTS_PROVIDER_H_
