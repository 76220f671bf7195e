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

#ifndef POETRY_DP_CLI_CONFIG_H_
#define POETRY_DP_CLI_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "poetry_dp/core/types.h"
#include "poetry_dp/engine/engine.h"
#include "poetry_dp/experts/evidence_expert.h"
#include "poetry_dp/experts/planted_model.h"
#include "poetry_dp/experts/remote_expert.h"
#include "poetry_dp/mechanisms/clip.h"

namespace poetry_dp {

inline constexpr int kConfigVersion = 1;

enum class ExperimentKind { kClassify, kGenerate, kPbs, kConverge, kMia, kCompareAgg, kCalibrate };

const char* ExperimentKindName(ExperimentKind kind);

enum class ProviderKind { kEvidence, kRemote };

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kEvidence;
  RemoteExpertConfig remote;
};

struct ConvergeConfig {
  std::vector<int> j_grid = {4, 16, 64, 256};
  int trials = 50;
  int64_t n_mc = 400000;
  PlantedModelConfig planted;
};

struct MiaConfig {
  int seeds = 50;
  int examples = 20;
  int repeats = 1;
};

struct CompareConfig {
  int draws = 10000;
  int num_classes = 4;
  double exponent = 1.7;
  double exponent_jitter = 0.0;
};

struct RunConfig {
  int version = kConfigVersion;
  ExperimentKind experiment = ExperimentKind::kClassify;
  uint64_t master_seed = 0;
  std::vector<uint64_t> seeds;  // seed indices
  int queries_per_seed = 20;
  ProviderConfig provider;
  SyntheticTaskConfig task;
  std::vector<int> num_examples = {4};  // J sweep
  int group_size = 1;
  double gamma = 2.0;
  double epsilon = 1.0;
  double delta = 1e-5;
  int max_tokens = 1;
  std::optional<CompositionMode> composition;  // default: advanced iff T > 1
  std::vector<InferenceMode> modes = {InferenceMode::kPoeDp};
  ClipMode clip_mode = ClipMode::kClamp;
  PbsConfig pbs;
  bool audit = false;
  ConvergeConfig converge;
  MiaConfig mia;
  CompareConfig compare;
  std::string output;  // JSONL path; may be overridden by --out

  nlohmann::json source;  // the parsed document, for hashing
};

// Parses and validates a config document. Unknown keys at any level, type
// mismatches, or out-of-range values are Config errors naming the key.
absl::StatusOr<RunConfig> ParseRunConfig(const nlohmann::json& doc);
absl::StatusOr<RunConfig> ParseRunConfigText(const std::string& text);
absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path);

// 16 hex digits of a hash over the canonical (key-sorted, compact) dump, so
// reordering keys or whitespace leaves it unchanged.
std::string ConfigHash(const nlohmann::json& doc);

// JSON Schema (draft 2020-12) for the config document.
const char* ConfigSchema();

}  // namespace poetry_dp

#endif  // POETRY_DP_CLI_CONFIG_H_
