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

#include "poetry_dp/engine/engine.h"

#include <limits>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"
#include "poetry_dp/mechanisms/exponential.h"

namespace poetry_dp {
namespace {

struct ModeName {
  InferenceMode mode;
  const char* name;
};

constexpr ModeName kModeNames[] = {
    {InferenceMode::kNonprivateFull, "nonprivate_full"},
    {InferenceMode::kSoftCiNoiseless, "soft_ci_noiseless"},
    {InferenceMode::kHardCiNoiseless, "hard_ci_noiseless"},
    {InferenceMode::kPoeDp, "poe_dp"},
    {InferenceMode::kRnmDp, "rnm_dp"},
    {InferenceMode::kPbsDp, "pbs_dp"},
};

absl::Status WrapProviderError(const absl::Status& status, int step,
                               std::optional<std::size_t> group) {
  const auto kind = GetErrorKind(status);
  return MakeError(
      ErrorKind::kProviderFailure,
      absl::StrCat("step ", step,
                   group.has_value() ? absl::StrCat(", group ", *group)
                                     : std::string(", full context"),
                   ": ", kind.has_value() ? ErrorKindName(*kind) : "error", " (",
                   std::string(status.message()), ")"));
}

// Utility vector that one token step releases from.
absl::StatusOr<UtilityVector> StepUtility(
    const std::string& query, const ExpertSet& set,
    const std::vector<std::vector<std::size_t>>& groups,
    ExpertProvider& provider, std::span<const Token> prefix,
    const GenerationOptions& options, double gamma, int step,
    uint64_t& calls) {
  const auto& examples = set.examples();
  if (options.mode == InferenceMode::kNonprivateFull) {
    ++calls;
    auto l = provider.FullContext(prefix, query, examples);
    if (!l.ok()) return WrapProviderError(l.status(), step, std::nullopt);
    UtilityVector u;
    u.kind = UtilityKind::kLogProbs;
    u.values = l->values();
    return u;
  }
  const bool votes = options.mode == InferenceMode::kHardCiNoiseless ||
                     options.mode == InferenceMode::kRnmDp;
  std::vector<LogProbVector> per_group;
  per_group.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto span = std::span<const ContextExample>(examples).subspan(
        groups[g].front(), groups[g].size());
    ++calls;
    auto l = provider.Query(prefix, query, span);
    if (!l.ok()) return WrapProviderError(l.status(), step, g);
    per_group.push_back(votes ? *std::move(l)
                              : ClipLogProbs(*l, gamma, options.clip_mode));
  }
  return votes ? AggregateVotes(per_group) : AggregatePoe(per_group, gamma);
}

absl::Status CheckRun(const ExpertSet& set, const ExpertProvider& provider,
                      const std::optional<PrivacyBudget>& budget,
                      const GenerationOptions& options) {
  if (IsPrivate(options.mode)) {
    if (!budget.has_value() || !budget->sigma.has_value()) {
      return MakeError(ErrorKind::kBudgetUnset,
                       absl::StrCat(InferenceModeName(options.mode),
                                    " needs a calibrated sigma"));
    }
    if (auto s = ValidateBudget(*budget); !s.ok()) return s;
  }
  if (options.max_tokens < 0) {
    return MakeError(ErrorKind::kInvalidArgument, "max_tokens must be >= 0");
  }
  for (const auto& ex : set.examples()) {
    if (ex.label.has_value() && ex.label->id >= provider.vocabulary().size()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "context label outside the provider vocabulary");
    }
  }
  return absl::OkStatus();
}

double GammaOf(const std::optional<PrivacyBudget>& budget) {
  return budget.has_value() ? budget->gamma : 2.0;
}

}  // namespace

const char* InferenceModeName(InferenceMode mode) {
  for (const auto& entry : kModeNames) {
    if (entry.mode == mode) return entry.name;
  }
  return "unknown";
}

std::optional<InferenceMode> ParseInferenceMode(const std::string& name) {
  for (const auto& entry : kModeNames) {
    if (name == entry.name) return entry.mode;
  }
  return std::nullopt;
}

bool IsPrivate(InferenceMode mode) {
  return mode == InferenceMode::kPoeDp || mode == InferenceMode::kRnmDp ||
         mode == InferenceMode::kPbsDp;
}

absl::StatusOr<GenerationRecord> Generate(const std::string& query,
                                          const ExpertSet& set,
                                          ExpertProvider& provider,
                                          const std::optional<PrivacyBudget>& budget,
                                          const GenerationOptions& options,
                                          RngStream& rng) {
  if (auto s = CheckRun(set, provider, budget, options); !s.ok()) return s;
  GenerationRecord record;
  record.mode = options.mode;
  record.budget = budget;
  record.seed = rng.seed();
  record.stream = rng.stream();

  if (options.mode == InferenceMode::kPbsDp) {
    if (options.max_tokens > 1) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "pbs_dp releases a single label; set max_tokens to 1");
    }
    if (options.max_tokens == 0) return record;
    RngStream step_rng = rng.Derive(0);
    auto outcome = PbsClassify(query, set, provider, *budget, options.pbs,
                               options.clip_mode, step_rng);
    if (!outcome.ok()) return outcome.status();
    record.tokens.push_back(outcome->label);
    record.expert_calls = outcome->full_context_calls;
    if (options.audit) {
      record.audit.push_back(
          UtilityVector{outcome->votes, 1.0, UtilityKind::kVotes});
    }
    return record;
  }

  const auto groups = PartitionGroups(set);
  const double gamma = GammaOf(budget);
  const Vocabulary& vocab = provider.vocabulary();
  for (int t = 0; t < options.max_tokens; ++t) {
    auto u = StepUtility(query, set, groups, provider, record.tokens, options,
                         gamma, t, record.expert_calls);
    if (!u.ok()) return u.status();
    RngStream step_rng = rng.Derive(static_cast<uint64_t>(t));
    std::size_t index = 0;
    switch (options.mode) {
      case InferenceMode::kNonprivateFull: {
        UtilityVector logits = *u;
        logits.sensitivity = 0.5;  // sigma = 1 -> weights exp(l)
        index = SampleExponential(logits, 1.0, step_rng);
        break;
      }
      case InferenceMode::kSoftCiNoiseless:
      case InferenceMode::kHardCiNoiseless:
        index = ArgmaxLowestIndex(u->values);
        break;
      case InferenceMode::kPoeDp:
        index = SampleExponential(*u, *budget->sigma, step_rng);
        break;
      case InferenceMode::kRnmDp: {
        auto noisy = NoisyArgmaxVotes(*u, *budget->sigma, step_rng);
        if (!noisy.ok()) return noisy.status();
        index = *noisy;
        break;
      }
      case InferenceMode::kPbsDp:
        break;
    }
    if (options.audit) record.audit.push_back(*u);
    record.tokens.push_back(Token{index, vocab.surface(index)});
    if (options.stop_at_eos && vocab.end_of_sequence() == index) {
      record.stopped_early = t + 1 < options.max_tokens;
      break;
    }
  }
  return record;
}

absl::StatusOr<Token> Classify(const std::string& query, const ExpertSet& set,
                               ExpertProvider& provider,
                               const std::optional<PrivacyBudget>& budget,
                               GenerationOptions options, RngStream& rng) {
  options.max_tokens = 1;
  auto record = Generate(query, set, provider, budget, options, rng);
  if (!record.ok()) return record.status();
  return record->tokens.front();
}

absl::StatusOr<PbsOutcome> PbsClassify(const std::string& query,
                                       const ExpertSet& set,
                                       ExpertProvider& provider,
                                       const PrivacyBudget& budget,
                                       const PbsConfig& config,
                                       ClipMode clip_mode, RngStream& rng) {
  if (config.rounds < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "pbs rounds must be >= 1");
  }
  auto round_budget = CalibrateSubsampling(budget.epsilon, budget.delta,
                                           config.rounds,
                                           config.inclusion_probability);
  if (!round_budget.ok()) return round_budget.status();
  PbsOutcome outcome;
  outcome.budget = *round_budget;
  const std::size_t k = provider.vocabulary().size();
  outcome.votes.assign(k, 0.0);
  const auto& examples = set.examples();
  for (int round = 0; round < config.rounds; ++round) {
    RngStream round_rng = rng.Derive(static_cast<uint64_t>(round));
    std::vector<ContextExample> subset;
    for (const auto& ex : examples) {
      if (round_rng.Bernoulli(config.inclusion_probability)) subset.push_back(ex);
    }
    outcome.total_subset_size += subset.size();
    if (subset.empty()) ++outcome.empty_rounds;
    ++outcome.full_context_calls;
    auto l = provider.FullContext({}, query, subset);
    if (!l.ok()) return WrapProviderError(l.status(), 0, std::nullopt);
    const LogProbVector clipped = ClipLogProbs(*l, budget.gamma, clip_mode);
    const UtilityVector u{clipped.values(), budget.gamma, UtilityKind::kPoe};
    outcome.votes[SampleExponential(u, round_budget->per_round_epsilon,
                                    round_rng)] += 1.0;
  }
  const std::size_t best = ArgmaxLowestIndex(outcome.votes);
  outcome.label = Token{best, provider.vocabulary().surface(best)};
  return outcome;
}

absl::StatusOr<std::vector<double>> ClassifyDistribution(
    const std::string& query, const ExpertSet& set, ExpertProvider& provider,
    const std::optional<PrivacyBudget>& budget,
    const GenerationOptions& options) {
  if (options.mode == InferenceMode::kPbsDp) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "no closed form for the subsampling baseline");
  }
  if (auto s = CheckRun(set, provider, budget, options); !s.ok()) return s;
  uint64_t calls = 0;
  auto u = StepUtility(query, set, PartitionGroups(set), provider, {}, options,
                       GammaOf(budget), 0, calls);
  if (!u.ok()) return u.status();
  switch (options.mode) {
    case InferenceMode::kNonprivateFull:
      return LogNormalize(u->values);
    case InferenceMode::kSoftCiNoiseless:
    case InferenceMode::kHardCiNoiseless: {
      std::vector<double> p(u->values.size(), 0.0);
      p[ArgmaxLowestIndex(u->values)] = 1.0;
      return p;
    }
    default:
      return ExponentialMechanismProbabilities(*u, *budget->sigma);
  }
}

}  // namespace poetry_dp
