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

#include "poetry_dp/cli/commands.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "poetry_dp/accounting/accounting.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/evaluation/experiments.h"
#include "poetry_dp/evaluation/metrics.h"
#include "poetry_dp/experts/evidence_expert.h"
#include "poetry_dp/experts/powerlaw_expert.h"
#include "poetry_dp/experts/remote_expert.h"

namespace poetry_dp {
namespace {

using nlohmann::json;

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string Fixed6(double v) {
  if (std::isnan(v)) return "nan";
  return absl::StrFormat("%.6f", v);
}

json BudgetJson(const std::optional<PrivacyBudget>& budget) {
  json b = json::object();
  if (!budget.has_value()) return b;
  b["epsilon"] = budget->epsilon;
  b["delta"] = budget->delta;
  b["max_tokens"] = budget->max_tokens;
  b["gamma"] = budget->gamma;
  b["composition"] = CompositionModeName(budget->composition);
  if (budget->sigma.has_value()) b["sigma"] = *budget->sigma;
  return b;
}

const char* UtilityKindName(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::kPoe:
      return "poe";
    case UtilityKind::kVotes:
      return "votes";
    case UtilityKind::kLogProbs:
      return "logprobs";
  }
  return "unknown";
}

absl::StatusOr<std::unique_ptr<ExpertProvider>> MakeProvider(
    const RunConfig& config, const SyntheticTask& task) {
  if (config.provider.kind == ProviderKind::kEvidence) {
    return std::unique_ptr<ExpertProvider>(new EvidenceExpert(task));
  }
  RemoteExpertConfig remote = config.provider.remote;
  if (const char* env = std::getenv("POETRY_DP_ENDPOINT"); env && *env) {
    remote.endpoint = env;
  }
  auto expert = RemoteExpert::Create(task.vocabulary(), remote);
  if (!expert.ok()) return expert.status();
  return std::unique_ptr<ExpertProvider>(std::move(*expert));
}

struct ClassUnit {
  InferenceMode mode;
  int num_examples;
  uint64_t seed;
};

absl::StatusOr<ExperimentOutput> RunClassification(const RunConfig& config,
                                                   int jobs) {
  auto task = SyntheticTask::Create(config.task);
  if (!task.ok()) return task.status();
  auto provider = MakeProvider(config, *task);
  if (!provider.ok()) return provider.status();
  if ((*provider)->descriptor().serial) jobs = 1;

  std::vector<ClassUnit> units;
  for (InferenceMode mode : config.modes) {
    for (int j : config.num_examples) {
      for (uint64_t seed : config.seeds) units.push_back({mode, j, seed});
    }
  }
  std::vector<absl::StatusOr<std::vector<QueryOutcome>>> results(
      units.size(), absl::UnknownError("not run"));
  ParallelFor(units.size(), jobs, [&](std::size_t i) {
    ClassificationSpec spec;
    spec.mode = units[i].mode;
    spec.num_examples = units[i].num_examples;
    spec.group_size = config.group_size;
    spec.queries = config.queries_per_seed;
    spec.epsilon = config.epsilon;
    spec.delta = config.delta;
    spec.gamma = config.gamma;
    spec.clip_mode = config.clip_mode;
    spec.pbs = config.pbs;
    spec.audit = config.audit;
    spec.max_tokens = config.max_tokens;
    spec.composition = config.composition;
    results[i] = RunClassificationSeed(*task, spec, **provider,
                                       config.master_seed, units[i].seed);
  });

  const std::string hash = ConfigHash(config.source);
  const Vocabulary& vocab = task->vocabulary();
  ExperimentOutput out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!results[i].ok()) return results[i].status();
    for (const QueryOutcome& o : *results[i]) {
      json r;
      r["config_hash"] = hash;
      r["experiment"] = ExperimentKindName(config.experiment);
      r["seed"] = units[i].seed;
      r["query_id"] = o.query_id;
      r["mode"] = InferenceModeName(units[i].mode);
      r["J"] = units[i].num_examples;
      r["group_size"] = config.group_size;
      r["label"] = vocab.surface(o.label);
      r["correct"] = o.correct;
      if (o.record.has_value()) {
        r["status"] = "ok";
        json tokens = json::array();
        for (const Token& t : o.record->tokens) {
          tokens.push_back(t.surface.value_or(vocab.surface(t.id)));
        }
        r["tokens"] = tokens;
        r["expert_calls"] = o.record->expert_calls;
        r["budget"] = BudgetJson(o.record->budget);
        if (config.audit) {
          json audit = json::array();
          for (const UtilityVector& u : o.record->audit) {
            audit.push_back({{"kind", UtilityKindName(u.kind)},
                             {"sensitivity", u.sensitivity},
                             {"values", u.values}});
          }
          r["audit"] = audit;
        }
      } else {
        r["status"] = "failed";
        r["error"] = o.error;
        ++out.failed;
      }
      out.records.push_back(std::move(r));
    }
  }
  out.summary_csv = ClassificationSummaryCsv(out.records);
  return out;
}

absl::StatusOr<ExperimentOutput> RunConverge(const RunConfig& config) {
  auto model = PlantedModel::Create(config.converge.planted);
  if (!model.ok()) return model.status();
  const RngStream rng(config.master_seed, HashBytes("converge"));
  auto result =
      ConvergenceExperiment(*model, config.converge.j_grid,
                            config.converge.trials, rng,
                            static_cast<std::size_t>(config.converge.n_mc));
  if (!result.ok()) return result.status();
  const std::string hash = ConfigHash(config.source);
  ExperimentOutput out;
  std::string csv = "J,median_l1,slope\n";
  const std::string slope =
      result->slope.has_value() ? Fixed6(*result->slope) : "nan";
  for (const ConvergenceRow& row : result->rows) {
    for (std::size_t t = 0; t < row.l1.size(); ++t) {
      out.records.push_back({{"config_hash", hash},
                             {"experiment", "converge"},
                             {"J", row.num_views},
                             {"trial", t},
                             {"l1", row.l1[t]}});
    }
    absl::StrAppend(&csv, row.num_views, ",", Fixed6(row.median_l1), ",",
                    slope, "\n");
  }
  out.summary_csv = csv;
  return out;
}

absl::StatusOr<ExperimentOutput> RunMia(const RunConfig& config) {
  const SyntheticTaskConfig task_config =
      config.source.contains("task") ? config.task : MembershipTaskConfig();
  auto task = SyntheticTask::Create(task_config);
  if (!task.ok()) return task.status();
  MiaSpec spec;
  spec.seeds = config.mia.seeds;
  spec.examples = config.mia.examples;
  spec.repeats = config.mia.repeats;
  spec.group_size = config.group_size;
  spec.epsilon = config.epsilon;
  spec.delta = config.delta;
  spec.gamma = config.gamma;
  auto result = RunMiaExperiment(*task, spec, config.master_seed);
  if (!result.ok()) return result.status();
  const std::string hash = ConfigHash(config.source);
  ExperimentOutput out;
  auto emit = [&](const char* mechanism, const std::vector<MiaScore>& scores) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out.records.push_back({{"config_hash", hash},
                             {"experiment", "mia"},
                             {"mechanism", mechanism},
                             {"index", i},
                             {"score", scores[i].value},
                             {"member", scores[i].is_member}});
    }
  };
  emit("nodp", result->nodp);
  emit("poe_dp", result->dp);
  out.summary_csv = absl::StrCat("mechanism,auroc\nnodp,",
                                 Fixed6(result->auroc_nodp), "\npoe_dp,",
                                 Fixed6(result->auroc_dp), "\n");
  return out;
}

absl::StatusOr<ExperimentOutput> RunCompare(const RunConfig& config) {
  std::vector<std::string> names;
  for (int i = 0; i < config.compare.num_classes; ++i) {
    names.push_back(absl::StrCat("class_", i));
  }
  auto vocab = Vocabulary::Create(names);
  if (!vocab.ok()) return vocab.status();
  PowerLawConfig pl;
  pl.exponent = config.compare.exponent;
  pl.exponent_jitter = config.compare.exponent_jitter;
  pl.seed = config.master_seed;
  auto expert = PowerLawExpert::Create(*vocab, pl);
  if (!expert.ok()) return expert.status();
  const RngStream rng(config.master_seed, HashBytes("compare"));
  const auto rows =
      CompareOnPowerLaw(**expert, config.compare.draws, config.gamma, rng);
  const std::string hash = ConfigHash(config.source);
  ExperimentOutput out;
  double sum[5] = {0, 0, 0, 0, 0};
  double max_hard = 0.0, max_soft = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const HardSoftComparison& c = rows[i];
    out.records.push_back({{"config_hash", hash},
                           {"experiment", "compare_agg"},
                           {"draw", i},
                           {"dinf_hard", c.dinf_hard},
                           {"dinf_soft", c.dinf_soft},
                           {"lmean_full", c.lmean_full},
                           {"lmean_hard", c.lmean_hard},
                           {"lmean_soft", c.lmean_soft}});
    sum[0] += c.dinf_hard;
    sum[1] += c.dinf_soft;
    sum[2] += c.lmean_full;
    sum[3] += c.lmean_hard;
    sum[4] += c.lmean_soft;
    max_hard = std::max(max_hard, c.dinf_hard);
    max_soft = std::max(max_soft, c.dinf_soft);
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  out.summary_csv = absl::StrCat(
      "metric,full,hard,soft\n", "mean_lmean,", Fixed6(sum[2] / n), ",",
      Fixed6(sum[3] / n), ",", Fixed6(sum[4] / n), "\n", "mean_dinf,",
      Fixed6(0.0), ",", Fixed6(sum[0] / n), ",", Fixed6(sum[1] / n), "\n",
      "max_dinf,", Fixed6(0.0), ",", Fixed6(max_hard), ",", Fixed6(max_soft),
      "\n");
  return out;
}

int PrintCalibration(double epsilon, double delta, int tokens,
                     std::optional<CompositionMode> mode, std::ostream& out,
                     std::ostream& err) {
  const CompositionMode m = mode.value_or(DefaultComposition(delta, tokens));
  auto result = CalibrateSigma(epsilon, delta, tokens, m);
  if (!result.ok()) {
    err << "calibrate: " << result.status().message() << "\n";
    return kExitUsage;
  }
  out << absl::StrFormat(
      "composition=%s\nsigma=%.12g\nachieved_epsilon=%.12g\nresidual=%.6g\n",
      CompositionModeName(m), result->sigma, result->achieved_epsilon,
      result->residual);
  return kExitOk;
}

int ExecuteConfig(RunConfig config, std::optional<ExperimentKind> expected,
                  int jobs, const std::string& out_flag, std::ostream& out,
                  std::ostream& err) {
  if (expected.has_value()) {
    if (!config.source.contains("experiment")) {
      config.experiment = *expected;
    } else if (config.experiment != *expected) {
      err << "config experiment \"" << ExperimentKindName(config.experiment)
          << "\" does not match the subcommand\n";
      return kExitUsage;
    }
  }
  if (config.experiment == ExperimentKind::kCalibrate) {
    return PrintCalibration(config.epsilon, config.delta, config.max_tokens,
                            config.composition, out, err);
  }
  std::string path = out_flag.empty() ? config.output : out_flag;
  if (path.empty()) {
    path = absl::StrCat(ExperimentKindName(config.experiment), ".jsonl");
  }
  auto result = RunExperiment(config, jobs);
  if (!result.ok()) {
    err << "error: " << result.status().message() << "\n";
    const auto kind = GetErrorKind(result.status());
    return kind == ErrorKind::kConfig || kind == ErrorKind::kInvalidArgument ||
                   kind == ErrorKind::kBudgetUnset
               ? kExitUsage
               : kExitFailureThreshold;
  }
  std::string jsonl;
  for (const json& r : result->records) absl::StrAppend(&jsonl, r.dump(), "\n");
  if (auto s = WriteFileAtomic(path, jsonl); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitFailureThreshold;
  }
  const std::string summary = SummaryPath(path);
  if (auto s = WriteFileAtomic(summary, result->summary_csv); !s.ok()) {
    err << "error: " << s.message() << "\n";
    return kExitFailureThreshold;
  }
  out << "wrote " << result->records.size() << " records to " << path
      << "\nsummary: " << summary << "\n";
  const std::size_t n = result->records.size();
  if (result->failed > 0) {
    err << "warning: " << result->failed << " of " << n
        << " records failed and are excluded from the summary\n";
  }
  if (n > 0 && static_cast<double>(result->failed) >
                   kMaxFailureFraction * static_cast<double>(n)) {
    return kExitFailureThreshold;
  }
  return kExitOk;
}

}  // namespace

absl::StatusOr<ExperimentOutput> RunExperiment(const RunConfig& config,
                                               int jobs) {
  switch (config.experiment) {
    case ExperimentKind::kClassify:
    case ExperimentKind::kGenerate:
    case ExperimentKind::kPbs:
      return RunClassification(config, jobs);
    case ExperimentKind::kConverge:
      return RunConverge(config);
    case ExperimentKind::kMia:
      return RunMia(config);
    case ExperimentKind::kCompareAgg:
      return RunCompare(config);
    case ExperimentKind::kCalibrate:
      break;
  }
  return MakeError(ErrorKind::kInvalidArgument,
                   "calibrate has no record output");
}

std::string ClassificationSummaryCsv(const std::vector<json>& records) {
  // (mode, J) in first-seen order; seeds in first-seen order within each.
  struct SeedTally {
    uint64_t seed;
    double correct = 0;
    double total = 0;
  };
  std::vector<std::pair<std::string, int>> keys;
  std::map<std::pair<std::string, int>, std::vector<SeedTally>> tallies;
  for (const json& r : records) {
    auto key = std::make_pair(r.at("mode").get<std::string>(),
                              r.at("J").get<int>());
    if (!tallies.count(key)) keys.push_back(key);
    auto& seeds = tallies[key];
    if (r.at("status").get<std::string>() != "ok") continue;
    const uint64_t seed = r.at("seed").get<uint64_t>();
    auto it = std::find_if(seeds.begin(), seeds.end(),
                           [&](const SeedTally& s) { return s.seed == seed; });
    if (it == seeds.end()) {
      seeds.push_back({seed});
      it = seeds.end() - 1;
    }
    it->total += 1;
    it->correct += r.at("correct").get<bool>() ? 1 : 0;
  }
  std::string csv = "mode,J,mean_acc,stderr\n";
  for (const auto& key : keys) {
    std::vector<double> acc;
    for (const auto& s : tallies[key]) acc.push_back(s.correct / s.total);
    double mean = std::nan("");
    double se = std::nan("");
    if (auto ms = ComputeMeanStderr(acc); ms.ok()) {
      mean = ms->mean;
      se = ms->standard_error;
    } else if (acc.size() == 1) {
      mean = acc[0];
    }
    absl::StrAppend(&csv, key.first, ",", key.second, ",", Fixed6(mean), ",",
                    Fixed6(se), "\n");
  }
  return csv;
}

std::string SummaryPath(const std::string& jsonl_path) {
  std::filesystem::path p(jsonl_path);
  p.replace_extension();
  return p.string() + ".summary.csv";
}

absl::Status WriteFileAtomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp";
  std::error_code ec;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("cannot write ", tmp));
    }
    f << data;
    f.flush();
    if (!f) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("short write to ", tmp));
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("cannot rename onto ", path));
  }
  return absl::OkStatus();
}

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Private in-context classification with a product of experts"};
  app.require_subcommand(0, 1);
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema,
               "Print the config JSON schema and exit");

  double epsilon = 1.0, delta = 1e-5;
  int tokens = 1;
  std::string comp_name;
  auto* calibrate = app.add_subcommand("calibrate", "Find sigma for a budget");
  calibrate->add_option("--epsilon", epsilon, "Total epsilon")->required();
  calibrate->add_option("--delta", delta, "Total delta");
  calibrate->add_option("--tokens", tokens, "Tokens released (T)");
  calibrate->add_option("--mode", comp_name, "naive or advanced");

  std::string config_path, out_path;
  int jobs = 1;
  struct Sub {
    CLI::App* app;
    std::optional<ExperimentKind> kind;
  };
  std::vector<Sub> subs = {
      {app.add_subcommand("run", "Run the experiment a config names"),
       std::nullopt},
      {app.add_subcommand("converge", "Convergence on the planted model"),
       ExperimentKind::kConverge},
      {app.add_subcommand("mia", "Membership inference AUROC"),
       ExperimentKind::kMia},
      {app.add_subcommand("compare-agg", "Hard vs soft single-expert metrics"),
       ExperimentKind::kCompareAgg},
  };
  for (auto& s : subs) {
    s.app->add_option("--config", config_path, "Config JSON path")->required();
    s.app->add_option("--jobs", jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    s.app->add_option("--out", out_path, "JSONL output path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  if (print_schema) {
    out << ConfigSchema();
    return kExitOk;
  }
  if (calibrate->parsed()) {
    std::optional<CompositionMode> mode;
    if (!comp_name.empty()) {
      mode = ParseCompositionMode(comp_name);
      if (!mode.has_value()) {
        err << "calibrate: --mode must be naive or advanced\n";
        return kExitUsage;
      }
    }
    return PrintCalibration(epsilon, delta, tokens, mode, out, err);
  }
  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    auto config = LoadRunConfig(config_path);
    if (!config.ok()) {
      err << "config error: " << config.status().message() << "\n";
      return kExitUsage;
    }
    return ExecuteConfig(*std::move(config), s.kind, jobs, out_path, out, err);
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace poetry_dp
