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

#ifndef POETRY_DP_ENGINE_ENGINE_H_
#define POETRY_DP_ENGINE_ENGINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/accounting/accounting.h"
#include "poetry_dp/core/rng.h"
#include "poetry_dp/core/types.h"
#include "poetry_dp/experts/provider.h"
#include "poetry_dp/mechanisms/aggregate.h"
#include "poetry_dp/mechanisms/clip.h"

namespace poetry_dp {

enum class InferenceMode {
  kNonprivateFull,    // one full-context call, sample from its distribution
  kSoftCiNoiseless,   // argmax of summed clipped log-probs
  kHardCiNoiseless,   // argmax of summed argmax votes
  kPoeDp,             // exponential mechanism over summed clipped log-probs
  kRnmDp,             // exponential mechanism over vote counts
  kPbsDp,             // subsample-and-vote (classification only)
};

const char* InferenceModeName(InferenceMode mode);
std::optional<InferenceMode> ParseInferenceMode(const std::string& name);
bool IsPrivate(InferenceMode mode);

// Subsampling baseline settings: `rounds` Poisson(q) subsets of the context.
struct PbsConfig {
  int rounds = 100;
  double inclusion_probability = 0.5;
};

struct GenerationOptions {
  InferenceMode mode = InferenceMode::kPoeDp;
  int max_tokens = 1;
  ClipMode clip_mode = ClipMode::kClamp;
  // Keep the per-token utility vectors (pre-noise) in the record.
  bool audit = false;
  // Stop after emitting the vocabulary's end-of-sequence token, if it has one.
  bool stop_at_eos = true;
  PbsConfig pbs;
};

struct GenerationRecord {
  std::vector<Token> tokens;
  // One entry per emitted token when auditing: the utility vector the release
  // was computed from (PoE sums, vote counts, or full-context log-probs).
  std::vector<UtilityVector> audit;
  InferenceMode mode = InferenceMode::kPoeDp;
  std::optional<PrivacyBudget> budget;
  uint64_t seed = 0;
  uint64_t stream = 0;
  uint64_t expert_calls = 0;
  bool stopped_early = false;
};

// Algorithm-1 style generation and its baselines.
//
// Each token step t draws from rng.Derive(t). Per-example modes call the
// provider once per clipping group with the tokens emitted so far as prefix,
// so a step costs ExpertSet::num_groups() calls. Noise is calibrated for
// options.max_tokens up front by the caller (see MakeBudget); stopping early
// only underspends it.
//
// Errors: BudgetUnset for a private mode without a calibrated sigma,
// ProviderFailure (with step and group in the message) when a provider call
// fails, InvalidArgument for pbs_dp with more than one token or a provider
// whose vocabulary size differs from the run.
absl::StatusOr<GenerationRecord> Generate(const std::string& query,
                                          const ExpertSet& set,
                                          ExpertProvider& provider,
                                          const std::optional<PrivacyBudget>& budget,
                                          const GenerationOptions& options,
                                          RngStream& rng);

// Single-token release; identical to Generate with max_tokens = 1.
absl::StatusOr<Token> Classify(const std::string& query, const ExpertSet& set,
                               ExpertProvider& provider,
                               const std::optional<PrivacyBudget>& budget,
                               GenerationOptions options, RngStream& rng);

struct PbsOutcome {
  Token label;
  std::vector<double> votes;       // summed per-round noisy one-hot votes
  SubsamplingBudget budget;
  uint64_t full_context_calls = 0;
  uint64_t total_subset_size = 0;  // summed over rounds
  uint64_t empty_rounds = 0;
};

// Subsampling baseline. Each round includes every example independently with
// probability q, makes one full-context call on that subset (a zero-shot call
// when it is empty), clips the result to [-gamma, 0] and releases one label
// with the exponential mechanism at the per-round budget from
// CalibrateSubsampling. The answer is the argmax of the summed votes.
absl::StatusOr<PbsOutcome> PbsClassify(const std::string& query,
                                       const ExpertSet& set,
                                       ExpertProvider& provider,
                                       const PrivacyBudget& budget,
                                       const PbsConfig& config,
                                       ClipMode clip_mode, RngStream& rng);

// Exact output distribution of a single-token release (no sampling). The
// noiseless modes give a point mass; pbs_dp is not supported.
absl::StatusOr<std::vector<double>> ClassifyDistribution(
    const std::string& query, const ExpertSet& set, ExpertProvider& provider,
    const std::optional<PrivacyBudget>& budget, const GenerationOptions& options);

}  // namespace poetry_dp

#endif  // POETRY_DP_ENGINE_ENGINE_H_
