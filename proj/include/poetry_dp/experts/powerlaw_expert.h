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

#ifndef POETRY_DP_EXPERTS_POWERLAW_EXPERT_H_
#define POETRY_DP_EXPERTS_POWERLAW_EXPERT_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/experts/provider.h"

namespace poetry_dp {

struct PowerLawConfig {
  double exponent = 1.7;
  // Per-call exponent is exponent * exp(jitter * z), z ~ N(0, 1).
  double exponent_jitter = 0.0;
  uint64_t seed = 0;
};

// Zipf-like ranked distribution p_r proportional to r^-exponent, r = 1..K,
// in descending order.
std::vector<double> ZipfProbabilities(std::size_t k, double exponent);

// Synthetic expert whose predictions follow a power law over a random
// permutation of the vocabulary. The permutation (and any exponent jitter)
// is a deterministic function of the call inputs and the provider seed.
// FullContext is the unclipped product of the per-example predictions; the
// zero-shot call draws a fresh power law keyed on the query alone.
class PowerLawExpert : public ExpertProvider {
 public:
  static absl::StatusOr<std::unique_ptr<PowerLawExpert>> Create(
      Vocabulary vocabulary, PowerLawConfig config);

  const Vocabulary& vocabulary() const override { return vocabulary_; }
  ProviderDescriptor descriptor() const override { return {"powerlaw"}; }

  // Probability vector (not logs) for one call; exposed for comparisons.
  std::vector<double> Probabilities(uint64_t call_digest) const;

 protected:
  absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> group) override;
  absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> examples) override;

 private:
  PowerLawExpert(Vocabulary vocabulary, PowerLawConfig config)
      : vocabulary_(std::move(vocabulary)), config_(config) {}

  Vocabulary vocabulary_;
  PowerLawConfig config_;
};

}  // namespace poetry_dp

#endif  // POETRY_DP_EXPERTS_POWERLAW_EXPERT_H_
