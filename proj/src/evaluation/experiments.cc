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

#include "poetry_dp/evaluation/experiments.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "poetry_dp/accounting/accounting.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"
#include "poetry_dp/evaluation/metrics.h"
#include "poetry_dp/mechanisms/clip.h"

namespace poetry_dp {
namespace {

const uint64_t kContextTag = HashBytes("context");
const uint64_t kQueryTag = HashBytes("query");
const uint64_t kReleaseTag = HashBytes("release");
const uint64_t kLimitTag = HashBytes("limit");
const uint64_t kMiaTag = HashBytes("mia");

absl::StatusOr<PrivacyBudget> BudgetFor(const ClassificationSpec& spec) {
  if (!IsPrivate(spec.mode)) {
    PrivacyBudget b;
    b.gamma = spec.gamma;
    b.max_tokens = spec.max_tokens;
    return b;
  }
  return MakeBudget(spec.epsilon, spec.delta, spec.max_tokens, spec.gamma,
                    spec.composition);
}

}  // namespace

absl::StatusOr<ConvergenceResult> ConvergenceExperiment(
    const PlantedModel& model, std::span<const int> j_grid, int trials,
    const RngStream& rng, std::size_t n_mc) {
  if (trials < 10) {
    return MakeError(ErrorKind::kInvalidArgument, "need at least 10 trials");
  }
  if (j_grid.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "empty J grid");
  }
  for (std::size_t i = 0; i < j_grid.size(); ++i) {
    if (j_grid[i] < 1 || (i > 0 && j_grid[i] <= j_grid[i - 1])) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "J grid must be positive and strictly increasing");
    }
  }
  ConvergenceResult result;
  RngStream limit_rng = rng.Derive(kLimitTag);
  result.limit = model.LimitDistribution(n_mc, limit_rng);

  std::vector<double> js, medians;
  for (int j : j_grid) {
    ConvergenceRow row;
    row.num_views = j;
    for (int t = 0; t < trials; ++t) {
      RngStream trial_rng = rng.Derive(
          CombineIds({static_cast<uint64_t>(j), static_cast<uint64_t>(t)}));
      const auto views = model.SampleViews(j, trial_rng);
      const auto p = model.FullContextDistribution(views);
      row.l1.push_back(*L1Dist(p, result.limit));
    }
    row.median_l1 = Median(row.l1);
    js.push_back(j);
    medians.push_back(row.median_l1);
    result.rows.push_back(std::move(row));
  }
  result.degenerate = std::all_of(medians.begin(), medians.end(),
                                  [](double m) { return m <= 1e-12; });
  if (!result.degenerate) result.slope = LogLogSlope(js, medians);
  return result;
}

HardSoftComparison CompareHardSoft(std::span<const double> p, std::size_t y,
                                   double gamma) {
  std::vector<double> hard(p.size(), 0.0);
  hard[ArgmaxLowestIndex(p)] = 1.0;
  const std::vector<double> soft = ClampProbabilities(p, gamma);
  HardSoftComparison c;
  c.dinf_hard = *DInf(p, hard);
  c.dinf_soft = *DInf(p, soft);
  c.lmean_full = p[y];
  c.lmean_hard = hard[y];
  c.lmean_soft = soft[y];
  return c;
}

std::vector<HardSoftComparison> CompareOnPowerLaw(const PowerLawExpert& expert,
                                                  int draws, double gamma,
                                                  const RngStream& rng) {
  std::vector<HardSoftComparison> out;
  out.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    const auto p = expert.Probabilities(static_cast<uint64_t>(i));
    RngStream label_rng = rng.Derive(static_cast<uint64_t>(i));
    double u = label_rng.Uniform();
    std::size_t y = p.size() - 1;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (u < p[k]) {
        y = k;
        break;
      }
      u -= p[k];
    }
    out.push_back(CompareHardSoft(p, y, gamma));
  }
  return out;
}

absl::StatusOr<std::vector<QueryOutcome>> RunClassificationSeed(
    const SyntheticTask& task, const ClassificationSpec& spec,
    ExpertProvider& provider, uint64_t master_seed, uint64_t seed) {
  if (spec.num_examples < 1 || spec.group_size < 1 || spec.queries < 0 ||
      spec.max_tokens < 1) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "num_examples, group_size and max_tokens must be >= 1");
  }
  auto budget_or = BudgetFor(spec);
  if (!budget_or.ok()) return budget_or.status();
  const std::optional<PrivacyBudget> budget = *budget_or;

  // Context prefix is nested: the first J of a fixed draw order, so larger J
  // extends smaller J for the same seed.
  RngStream context_rng(master_seed, CombineIds({seed, kContextTag}));
  std::vector<ContextExample> examples;
  for (int i = 0; i < spec.num_examples; ++i) {
    RngStream ex_rng = context_rng.Derive(static_cast<uint64_t>(i));
    const LabeledDocument doc =
        task.config().balanced_context
            ? task.SampleOfClass(static_cast<std::size_t>(i) % task.num_classes(), ex_rng)
            : task.Sample(ex_rng);
    examples.push_back(task.ToExample(doc));
  }
  auto set = ExpertSet::Create(std::move(examples), spec.group_size);
  if (!set.ok()) return set.status();

  GenerationOptions options;
  options.mode = spec.mode;
  options.max_tokens = spec.max_tokens;
  options.clip_mode = spec.clip_mode;
  options.audit = spec.audit;
  options.pbs = spec.pbs;

  std::vector<QueryOutcome> outcomes;
  for (int q = 0; q < spec.queries; ++q) {
    RngStream query_rng(master_seed,
                        CombineIds({seed, kQueryTag, static_cast<uint64_t>(q)}));
    const LabeledDocument doc = task.Sample(query_rng);
    RngStream release_rng(
        master_seed,
        CombineIds({seed, kReleaseTag, static_cast<uint64_t>(q),
                    static_cast<uint64_t>(spec.mode),
                    static_cast<uint64_t>(spec.num_examples)}));
    QueryOutcome outcome;
    outcome.query_id = q;
    outcome.label = doc.label;
    auto record =
        Generate(doc.payload, *set, provider, budget, options, release_rng);
    if (record.ok()) {
      outcome.correct =
          !record->tokens.empty() && record->tokens.front().id == doc.label;
      outcome.record = *std::move(record);
    } else {
      outcome.error = std::string(record.status().message());
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

absl::StatusOr<std::vector<double>> SeedAccuracies(const SyntheticTask& task,
                                                   const ClassificationSpec& spec,
                                                   uint64_t master_seed,
                                                   int seeds) {
  std::vector<double> acc;
  acc.reserve(seeds);
  EvidenceExpert provider(task);
  for (int s = 0; s < seeds; ++s) {
    auto outcomes = RunClassificationSeed(task, spec, provider, master_seed, s);
    if (!outcomes.ok()) return outcomes.status();
    double correct = 0.0;
    for (const auto& o : *outcomes) correct += o.correct ? 1.0 : 0.0;
    acc.push_back(outcomes->empty() ? 0.0 : correct / outcomes->size());
  }
  return acc;
}

SyntheticTaskConfig MembershipTaskConfig() {
  SyntheticTaskConfig config;
  config.topic_mass = 0.15;
  config.vocab_size = 1000;
  config.doc_length = 20;
  return config;
}

absl::StatusOr<std::vector<MiaScore>> MiaScoresFromUtilities(
    std::span<const GenerationRecord> runs, std::span<const std::size_t> targets,
    const std::vector<bool>& is_member) {
  if (runs.size() != targets.size() || runs.size() != is_member.size()) {
    return MakeError(ErrorKind::kArityMismatch,
                     "runs, targets and membership differ in length");
  }
  std::vector<MiaScore> scores;
  scores.reserve(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].audit.empty()) {
      return MakeError(ErrorKind::kMissingAudit,
                       absl::StrCat("run ", i, " has no utility audit"));
    }
    const auto& u = runs[i].audit.front().values;
    if (targets[i] >= u.size()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("target ", targets[i], " out of range"));
    }
    scores.push_back({u[targets[i]], is_member[i]});
  }
  return scores;
}

std::vector<MiaScore> MiaScoresFromLabels(
    std::span<const std::vector<GenerationRecord>> runs,
    std::span<const std::size_t> targets, const std::vector<bool>& is_member) {
  std::vector<MiaScore> scores;
  const std::size_t n =
      std::min({runs.size(), targets.size(), is_member.size()});
  for (std::size_t i = 0; i < n; ++i) {
    double hits = 0.0;
    for (const auto& r : runs[i]) {
      if (!r.tokens.empty() && r.tokens.front().id == targets[i]) hits += 1.0;
    }
    const double total = runs[i].empty() ? 1.0 : runs[i].size();
    scores.push_back({hits / total, is_member[i]});
  }
  return scores;
}

absl::StatusOr<MiaResult> RunMiaExperiment(const SyntheticTask& task,
                                           const MiaSpec& spec,
                                           uint64_t master_seed) {
  if (spec.seeds < 1 || spec.examples < 1 || spec.repeats < 1) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "seeds, examples and repeats must be >= 1");
  }
  auto budget = MakeBudget(spec.epsilon, spec.delta, 1, spec.gamma);
  if (!budget.ok()) return budget.status();
  PrivacyBudget noiseless;
  noiseless.gamma = spec.gamma;
  EvidenceExpert provider(task);

  std::vector<GenerationRecord> audited;
  std::vector<std::vector<GenerationRecord>> released;
  std::vector<std::size_t> targets;
  std::vector<bool> member;
  for (int s = 0; s < spec.seeds; ++s) {
    const uint64_t seed = static_cast<uint64_t>(s);
    RngStream data_rng(master_seed, CombineIds({kMiaTag, seed}));
    std::vector<LabeledDocument> members, outsiders;
    for (int i = 0; i < spec.examples; ++i) {
      RngStream r = data_rng.Derive(CombineIds({0, static_cast<uint64_t>(i)}));
      members.push_back(task.Sample(r));
    }
    for (int i = 0; i < spec.examples; ++i) {
      RngStream r = data_rng.Derive(CombineIds({1, static_cast<uint64_t>(i)}));
      outsiders.push_back(task.Sample(r));
    }
    std::vector<ContextExample> examples;
    for (const auto& d : members) examples.push_back(task.ToExample(d));
    auto set = ExpertSet::Create(std::move(examples), spec.group_size);
    if (!set.ok()) return set.status();

    auto attack = [&](const LabeledDocument& doc, bool is_member,
                      uint64_t index) -> absl::Status {
      GenerationOptions options;
      options.max_tokens = 1;
      options.audit = true;
      options.mode = InferenceMode::kSoftCiNoiseless;
      RngStream unused(master_seed, 0);
      auto soft = Generate(doc.payload, *set, provider, noiseless, options, unused);
      if (!soft.ok()) return soft.status();
      audited.push_back(*std::move(soft));

      options.audit = false;
      options.mode = InferenceMode::kPoeDp;
      std::vector<GenerationRecord> reps;
      for (int r = 0; r < spec.repeats; ++r) {
        RngStream rng(master_seed,
                      CombineIds({kMiaTag, kReleaseTag, seed, index,
                                  static_cast<uint64_t>(r)}));
        auto dp = Generate(doc.payload, *set, provider, *budget, options, rng);
        if (!dp.ok()) return dp.status();
        reps.push_back(*std::move(dp));
      }
      released.push_back(std::move(reps));
      targets.push_back(doc.label);
      member.push_back(is_member);
      return absl::OkStatus();
    };
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (auto st = attack(members[i], true, i); !st.ok()) return st;
    }
    for (std::size_t i = 0; i < outsiders.size(); ++i) {
      if (auto st = attack(outsiders[i], false, members.size() + i); !st.ok()) {
        return st;
      }
    }
  }

  MiaResult result;
  auto nodp = MiaScoresFromUtilities(audited, targets, member);
  if (!nodp.ok()) return nodp.status();
  result.nodp = *std::move(nodp);
  result.dp = MiaScoresFromLabels(released, targets, member);

  auto auroc = [](const std::vector<MiaScore>& scores) -> absl::StatusOr<double> {
    std::vector<double> in, out;
    for (const auto& s : scores) (s.is_member ? in : out).push_back(s.value);
    auto roc = RocAuc(in, out);
    if (!roc.ok()) return roc.status();
    return roc->auroc;
  };
  auto a = auroc(result.nodp);
  if (!a.ok()) return a.status();
  auto b = auroc(result.dp);
  if (!b.ok()) return b.status();
  result.auroc_nodp = *a;
  result.auroc_dp = *b;
  return result;
}

}  // namespace poetry_dp
