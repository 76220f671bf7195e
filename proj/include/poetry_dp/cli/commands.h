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

#ifndef POETRY_DP_CLI_COMMANDS_H_
#define POETRY_DP_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "poetry_dp/cli/config.h"

namespace poetry_dp {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailureThreshold = 1,
  kExitUsage = 2,
};

// Share of failed records above which a run exits with kExitFailureThreshold.
inline constexpr double kMaxFailureFraction = 0.05;

struct ExperimentOutput {
  std::vector<nlohmann::json> records;  // one JSONL line each, in order
  std::string summary_csv;
  std::size_t failed = 0;
};

// Runs whatever `config.experiment` names (except calibrate) on up to `jobs`
// worker threads. Output order depends only on the config.
absl::StatusOr<ExperimentOutput> RunExperiment(const RunConfig& config,
                                               int jobs);

// mode,J,mean_acc,stderr from classification records. Failed records are
// left out; accuracy is averaged per seed first, then across seeds.
std::string ClassificationSummaryCsv(const std::vector<nlohmann::json>& records);

// "<dir>/<stem>.summary.csv" for "<dir>/<stem>.jsonl".
std::string SummaryPath(const std::string& jsonl_path);

// Writes via a sibling temp file and rename.
absl::Status WriteFileAtomic(const std::string& path, const std::string& data);

// Entry point behind the poetry-dp binary; returns the process exit code.
int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace poetry_dp

#endif  // POETRY_DP_CLI_COMMANDS_H_
