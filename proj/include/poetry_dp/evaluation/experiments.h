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

#ifndef POETRY_DP_EVALUATION_EXPERIMENTS_H_
#define POETRY_DP_EVALUATION_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/accounting/accounting.h"
#include "poetry_dp/core/rng.h"
#include "poetry_dp/engine/engine.h"
#include "poetry_dp/experts/evidence_expert.h"
#include "poetry_dp/experts/planted_model.h"
#include "poetry_dp/experts/powerlaw_expert.h"

namespace poetry_dp {

// ---- convergence on the planted model ----

struct ConvergenceRow {
  int num_views = 0;
  double median_l1 = 0.0;
  std::vector<double> l1;  // one per trial
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<double> limit;    // p_star
  std::optional<double> slope;  // unset when degenerate
  bool degenerate = false;      // every median is zero
};

// For each J in `j_grid` and each trial, draws J views, forms p_J and records
// ||p_J - p_star||_1. p_star comes from ExpectedPsi(n_mc). Trial (J, i) uses
// rng.Derive(CombineIds({J, i})), so rows do not depend on the grid.
// InvalidArgument unless the grid is strictly increasing and positive and
// trials >= 10.
absl::StatusOr<ConvergenceResult> ConvergenceExperiment(
    const PlantedModel& model, std::span<const int> j_grid, int trials,
    const RngStream& rng, std::size_t n_mc = 400000);

// ---- hard vs soft single-expert summaries ----

struct HardSoftComparison {
  double dinf_hard = 0.0;   // D_inf(p, one-hot argmax)
  double dinf_soft = 0.0;   // D_inf(p, clamp_gamma(p))
  double lmean_full = 0.0;  // p_y
  double lmean_hard = 0.0;
  double lmean_soft = 0.0;
};

HardSoftComparison CompareHardSoft(std::span<const double> p, std::size_t y,
                                   double gamma);

// `draws` power-law predictions (call digests 0..draws-1), each scored
// against a label drawn from the prediction itself.
std::vector<HardSoftComparison> CompareOnPowerLaw(const PowerLawExpert& expert,
                                                  int draws, double gamma,
                                                  const RngStream& rng);

// ---- classification accuracy on the synthetic task ----

struct ClassificationSpec {
  InferenceMode mode = InferenceMode::kPoeDp;
  int num_examples = 4;  // J
  int group_size = 1;
  int queries = 1;
  double epsilon = 1.0;
  double delta = 1e-5;
  double gamma = 2.0;
  ClipMode clip_mode = ClipMode::kClamp;
  PbsConfig pbs;
  bool audit = false;
  int max_tokens = 1;
  std::optional<CompositionMode> composition;  // DefaultComposition if unset
};

struct QueryOutcome {
  uint64_t query_id = 0;
  std::size_t label = 0;
  std::optional<GenerationRecord> record;  // unset on failure
  std::string error;
  bool correct = false;
};

// One seed of the classification protocol: a context of J class-unconditional
// draws and `queries` fresh test documents, both keyed on (master_seed, seed)
// only, so every mode and J sees the same data for a seed. Release noise is
// keyed on (seed, query, mode, J). Provider failures are recorded per query;
// a query counts as correct when its first released token is the label.
absl::StatusOr<std::vector<QueryOutcome>> RunClassificationSeed(
    const SyntheticTask& task, const ClassificationSpec& spec,
    ExpertProvider& provider, uint64_t master_seed, uint64_t seed);

// Per-seed accuracy over seeds 0..seeds-1 with an EvidenceExpert on `task`.
// Failures count as incorrect.
absl::StatusOr<std::vector<double>> SeedAccuracies(const SyntheticTask& task,
                                                   const ClassificationSpec& spec,
                                                   uint64_t master_seed,
                                                   int seeds);

// ---- membership inference ----

// Task used for the membership experiments: mostly background words over a
// large vocabulary, so each document is close to unique and membership is
// carried by the exact-match example.
SyntheticTaskConfig MembershipTaskConfig();

struct MiaScore {
  double value = 0.0;
  bool is_member = false;
};

// Score = the audited pre-noise utility of the target label at the first
// token. MissingAudit if a record carries no audit.
absl::StatusOr<std::vector<MiaScore>> MiaScoresFromUtilities(
    std::span<const GenerationRecord> runs, std::span<const std::size_t> targets,
    const std::vector<bool>& is_member);

// Label-only surrogate: fraction of the runs for one attack query whose
// released first token equals the target. `runs[i]` holds the repeated
// releases for attack query i.
std::vector<MiaScore> MiaScoresFromLabels(
    std::span<const std::vector<GenerationRecord>> runs,
    std::span<const std::size_t> targets, const std::vector<bool>& is_member);

struct MiaSpec {
  int seeds = 50;
  int examples = 20;  // context size; also the number of non-member draws
  int group_size = 1;
  double epsilon = 1.0;
  double delta = 1e-5;
  double gamma = 2.0;
  int repeats = 1;  // label-only releases per attack query
};

struct MiaResult {
  std::vector<MiaScore> nodp;
  std::vector<MiaScore> dp;
  double auroc_nodp = 0.5;
  double auroc_dp = 0.5;
};

// Members are the context examples themselves (query = payload, target =
// recorded label); non-members are fresh draws from the task. The no-DP
// attacker reads the soft_ci utilities; the DP attacker sees poe_dp labels.
absl::StatusOr<MiaResult> RunMiaExperiment(const SyntheticTask& task,
                                           const MiaSpec& spec,
                                           uint64_t master_seed);

}  // namespace poetry_dp

#endif  // POETRY_DP_EVALUATION_EXPERIMENTS_H_
