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

#include "poetry_dp/cli/config.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/rng.h"

namespace poetry_dp {
namespace {

using nlohmann::json;

absl::Status ConfigError(const std::string& where, const std::string& what) {
  return MakeError(ErrorKind::kConfig, absl::StrCat(where, ": ", what));
}

// Reads typed fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string where)
      : obj_(obj), where_(std::move(where)) {}

  absl::Status CheckObject() const {
    if (!obj_.is_object()) return ConfigError(where_, "expected an object");
    return absl::OkStatus();
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string Path(const std::string& key) const {
    return where_.empty() ? key : absl::StrCat(where_, ".", key);
  }

  absl::Status Number(const std::string& key, double& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_number()) return ConfigError(Path(key), "expected a number");
    out = v->get<double>();
    return absl::OkStatus();
  }

  absl::Status Integer(const std::string& key, int64_t& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_number_integer()) {
      return ConfigError(Path(key), "expected an integer");
    }
    out = v->get<int64_t>();
    return absl::OkStatus();
  }

  absl::Status Int(const std::string& key, int& out) {
    int64_t wide = out;
    if (auto s = Integer(key, wide); !s.ok()) return s;
    if (wide < INT32_MIN || wide > INT32_MAX) {
      return ConfigError(Path(key), "out of range");
    }
    out = static_cast<int>(wide);
    return absl::OkStatus();
  }

  absl::Status Bool(const std::string& key, bool& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_boolean()) return ConfigError(Path(key), "expected a boolean");
    out = v->get<bool>();
    return absl::OkStatus();
  }

  absl::Status String(const std::string& key, std::string& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_string()) return ConfigError(Path(key), "expected a string");
    out = v->get<std::string>();
    return absl::OkStatus();
  }

  absl::Status IntList(const std::string& key, std::vector<int>& out) {
    const json* v = Find(key);
    if (v == nullptr) return absl::OkStatus();
    if (!v->is_array() || v->empty()) {
      return ConfigError(Path(key), "expected a non-empty array of integers");
    }
    out.clear();
    for (const auto& e : *v) {
      if (!e.is_number_integer()) {
        return ConfigError(Path(key), "expected a non-empty array of integers");
      }
      out.push_back(e.get<int>());
    }
    return absl::OkStatus();
  }

  absl::Status Unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) {
        return ConfigError(Path(it.key()), "unknown key");
      }
    }
    return absl::OkStatus();
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

#define RETURN_IF_ERROR_CFG(expr)      \
  do {                                 \
    absl::Status _st = (expr);         \
    if (!_st.ok()) return _st;         \
  } while (0)

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::kClassify, "classify"},
    {ExperimentKind::kGenerate, "generate"},
    {ExperimentKind::kPbs, "pbs"},
    {ExperimentKind::kConverge, "converge"},
    {ExperimentKind::kMia, "mia"},
    {ExperimentKind::kCompareAgg, "compare_agg"},
    {ExperimentKind::kCalibrate, "calibrate"},
};

absl::Status ParseTask(const json& obj, SyntheticTaskConfig& task) {
  ObjectReader r(obj, "task");
  RETURN_IF_ERROR_CFG(r.CheckObject());
  RETURN_IF_ERROR_CFG(r.Int("num_classes", task.num_classes));
  RETURN_IF_ERROR_CFG(r.Int("vocab_size", task.vocab_size));
  RETURN_IF_ERROR_CFG(r.Int("topic_words", task.topic_words));
  RETURN_IF_ERROR_CFG(r.Number("topic_mass", task.topic_mass));
  RETURN_IF_ERROR_CFG(r.Int("doc_length", task.doc_length));
  RETURN_IF_ERROR_CFG(r.Number("beta", task.beta));
  RETURN_IF_ERROR_CFG(r.Number("label_noise", task.label_noise));
  RETURN_IF_ERROR_CFG(r.Number("zero_shot_strength", task.zero_shot_strength));
  RETURN_IF_ERROR_CFG(r.Bool("balanced_context", task.balanced_context));
  if (const json* names = r.Find("label_names")) {
    if (!names->is_array()) {
      return ConfigError("task.label_names", "expected an array of strings");
    }
    task.label_names.clear();
    for (const auto& n : *names) {
      if (!n.is_string()) {
        return ConfigError("task.label_names", "expected an array of strings");
      }
      task.label_names.push_back(n.get<std::string>());
    }
  }
  return r.Unknown();
}

absl::Status ParseProvider(const json& obj, ProviderConfig& provider) {
  ObjectReader r(obj, "provider");
  RETURN_IF_ERROR_CFG(r.CheckObject());
  std::string kind = "evidence";
  RETURN_IF_ERROR_CFG(r.String("kind", kind));
  if (kind == "evidence") {
    provider.kind = ProviderKind::kEvidence;
  } else if (kind == "remote") {
    provider.kind = ProviderKind::kRemote;
  } else {
    return ConfigError("provider.kind", "expected \"evidence\" or \"remote\"");
  }
  RETURN_IF_ERROR_CFG(r.String("endpoint", provider.remote.endpoint));
  RETURN_IF_ERROR_CFG(r.Int("timeout_ms", provider.remote.timeout_ms));
  RETURN_IF_ERROR_CFG(r.Int("retries", provider.remote.retries));
  RETURN_IF_ERROR_CFG(r.Int("backoff_ms", provider.remote.backoff_ms));
  RETURN_IF_ERROR_CFG(r.Int("max_in_flight", provider.remote.max_in_flight));
  RETURN_IF_ERROR_CFG(r.Bool("stochastic", provider.remote.stochastic));
  RETURN_IF_ERROR_CFG(r.Unknown());
  if (provider.remote.timeout_ms < 1 || provider.remote.retries < 0 ||
      provider.remote.backoff_ms < 0 || provider.remote.max_in_flight < 1) {
    return ConfigError("provider",
                       "timeout_ms and max_in_flight must be >= 1, retries "
                       "and backoff_ms >= 0");
  }
  return absl::OkStatus();
}

absl::Status ParsePlanted(const json& obj, PlantedModelConfig& p) {
  ObjectReader r(obj, "converge.planted");
  RETURN_IF_ERROR_CFG(r.CheckObject());
  RETURN_IF_ERROR_CFG(r.Int("num_classes", p.num_classes));
  RETURN_IF_ERROR_CFG(r.Int("state_dim", p.state_dim));
  RETURN_IF_ERROR_CFG(r.Int("view_dim", p.view_dim));
  RETURN_IF_ERROR_CFG(r.Number("view_noise", p.view_noise));
  RETURN_IF_ERROR_CFG(r.Number("psi_bound", p.psi_bound));
  RETURN_IF_ERROR_CFG(r.Number("residual_bound", p.residual_bound));
  RETURN_IF_ERROR_CFG(r.Bool("constant_psi", p.constant_psi));
  RETURN_IF_ERROR_CFG(r.Int("finite_views", p.finite_views));
  RETURN_IF_ERROR_CFG(r.Bool("uniform_prior", p.uniform_prior));
  int64_t seed = static_cast<int64_t>(p.seed);
  RETURN_IF_ERROR_CFG(r.Integer("seed", seed));
  if (seed < 0) return ConfigError("converge.planted.seed", "must be >= 0");
  p.seed = static_cast<uint64_t>(seed);
  return r.Unknown();
}

absl::Status ParseConverge(const json& obj, ConvergeConfig& c) {
  ObjectReader r(obj, "converge");
  RETURN_IF_ERROR_CFG(r.CheckObject());
  RETURN_IF_ERROR_CFG(r.IntList("J_grid", c.j_grid));
  RETURN_IF_ERROR_CFG(r.Int("trials", c.trials));
  RETURN_IF_ERROR_CFG(r.Integer("n_mc", c.n_mc));
  if (const json* p = r.Find("planted")) {
    RETURN_IF_ERROR_CFG(ParsePlanted(*p, c.planted));
  }
  RETURN_IF_ERROR_CFG(r.Unknown());
  for (std::size_t i = 0; i < c.j_grid.size(); ++i) {
    if (c.j_grid[i] < 1 || (i > 0 && c.j_grid[i] <= c.j_grid[i - 1])) {
      return ConfigError("converge.J_grid",
                         "must be positive and strictly increasing");
    }
  }
  if (c.trials < 10) return ConfigError("converge.trials", "must be >= 10");
  if (c.n_mc < 1) return ConfigError("converge.n_mc", "must be >= 1");
  return absl::OkStatus();
}

absl::Status ParseMia(const json& obj, MiaConfig& m) {
  ObjectReader r(obj, "mia");
  RETURN_IF_ERROR_CFG(r.CheckObject());
  RETURN_IF_ERROR_CFG(r.Int("seeds", m.seeds));
  RETURN_IF_ERROR_CFG(r.Int("examples", m.examples));
  RETURN_IF_ERROR_CFG(r.Int("repeats", m.repeats));
  RETURN_IF_ERROR_CFG(r.Unknown());
  if (m.seeds < 1 || m.examples < 1 || m.repeats < 1) {
    return ConfigError("mia", "seeds, examples and repeats must be >= 1");
  }
  return absl::OkStatus();
}

absl::Status ParseCompare(const json& obj, CompareConfig& c) {
  ObjectReader r(obj, "compare");
  RETURN_IF_ERROR_CFG(r.CheckObject());
  RETURN_IF_ERROR_CFG(r.Int("draws", c.draws));
  RETURN_IF_ERROR_CFG(r.Int("num_classes", c.num_classes));
  RETURN_IF_ERROR_CFG(r.Number("exponent", c.exponent));
  RETURN_IF_ERROR_CFG(r.Number("exponent_jitter", c.exponent_jitter));
  RETURN_IF_ERROR_CFG(r.Unknown());
  if (c.draws < 1 || c.num_classes < 2 || !(c.exponent > 0) ||
      !(c.exponent_jitter >= 0)) {
    return ConfigError("compare",
                       "draws >= 1, num_classes >= 2, exponent > 0 and "
                       "exponent_jitter >= 0 required");
  }
  return absl::OkStatus();
}

}  // namespace

const char* ExperimentKindName(ExperimentKind kind) {
  for (const auto& e : kKindNames) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

absl::StatusOr<RunConfig> ParseRunConfig(const json& doc) {
  RunConfig c;
  c.source = doc;
  ObjectReader r(doc, "");
  RETURN_IF_ERROR_CFG(r.CheckObject());

  const json* version = r.Find("version");
  if (version == nullptr) return ConfigError("version", "missing");
  if (!version->is_number_integer() || version->get<int64_t>() != kConfigVersion) {
    return ConfigError("version", absl::StrCat("expected ", kConfigVersion));
  }

  std::string experiment = "classify";
  RETURN_IF_ERROR_CFG(r.String("experiment", experiment));
  bool found = false;
  for (const auto& e : kKindNames) {
    if (experiment == e.name) {
      c.experiment = e.kind;
      found = true;
    }
  }
  if (!found) return ConfigError("experiment", "unknown experiment kind");

  int64_t master_seed = 0;
  RETURN_IF_ERROR_CFG(r.Integer("master_seed", master_seed));
  if (master_seed < 0) return ConfigError("master_seed", "must be >= 0");
  c.master_seed = static_cast<uint64_t>(master_seed);

  if (const json* seeds = r.Find("seeds")) {
    if (seeds->is_number_integer()) {
      const int64_t n = seeds->get<int64_t>();
      if (n < 1) return ConfigError("seeds", "count must be >= 1");
      for (int64_t i = 0; i < n; ++i) c.seeds.push_back(static_cast<uint64_t>(i));
    } else if (seeds->is_array() && !seeds->empty()) {
      std::set<int64_t> distinct;
      for (const auto& s : *seeds) {
        if (!s.is_number_integer() || s.get<int64_t>() < 0) {
          return ConfigError("seeds", "expected non-negative integers");
        }
        if (!distinct.insert(s.get<int64_t>()).second) {
          return ConfigError("seeds", "duplicate seed");
        }
        c.seeds.push_back(s.get<uint64_t>());
      }
    } else {
      return ConfigError("seeds", "expected a count or a non-empty array");
    }
  } else {
    for (uint64_t i = 0; i < 25; ++i) c.seeds.push_back(i);
  }

  RETURN_IF_ERROR_CFG(r.Int("queries_per_seed", c.queries_per_seed));
  if (c.queries_per_seed < 1) {
    return ConfigError("queries_per_seed", "must be >= 1");
  }
  if (const json* p = r.Find("provider")) {
    RETURN_IF_ERROR_CFG(ParseProvider(*p, c.provider));
  }
  if (const json* t = r.Find("task")) {
    RETURN_IF_ERROR_CFG(ParseTask(*t, c.task));
  }
  if (const json* j = r.Find("J")) {
    if (j->is_number_integer()) {
      c.num_examples = {j->get<int>()};
    } else {
      RETURN_IF_ERROR_CFG(r.IntList("J", c.num_examples));
    }
  }
  for (int j : c.num_examples) {
    if (j < 1) return ConfigError("J", "must be >= 1");
  }
  RETURN_IF_ERROR_CFG(r.Int("group_size", c.group_size));
  if (c.group_size < 1) return ConfigError("group_size", "must be >= 1");
  RETURN_IF_ERROR_CFG(r.Number("gamma", c.gamma));
  if (!(c.gamma > 0)) return ConfigError("gamma", "must be > 0");
  RETURN_IF_ERROR_CFG(r.Number("epsilon", c.epsilon));
  if (!(c.epsilon > 0)) return ConfigError("epsilon", "must be > 0");
  RETURN_IF_ERROR_CFG(r.Number("delta", c.delta));
  if (!(c.delta >= 0 && c.delta < 1)) {
    return ConfigError("delta", "must be in [0, 1)");
  }
  RETURN_IF_ERROR_CFG(r.Int("max_tokens", c.max_tokens));
  if (c.max_tokens < 1) return ConfigError("max_tokens", "must be >= 1");

  std::string composition;
  RETURN_IF_ERROR_CFG(r.String("composition", composition));
  if (!composition.empty()) {
    c.composition = ParseCompositionMode(composition);
    if (!c.composition.has_value()) {
      return ConfigError("composition", "expected \"naive\" or \"advanced\"");
    }
  }

  if (const json* modes = r.Find("modes")) {
    if (!modes->is_array() || modes->empty()) {
      return ConfigError("modes", "expected a non-empty array of mode names");
    }
    c.modes.clear();
    for (const auto& m : *modes) {
      if (!m.is_string()) return ConfigError("modes", "expected strings");
      auto mode = ParseInferenceMode(m.get<std::string>());
      if (!mode.has_value()) {
        return ConfigError("modes",
                           absl::StrCat("unknown mode \"", m.get<std::string>(),
                                        "\""));
      }
      c.modes.push_back(*mode);
    }
  } else if (c.experiment == ExperimentKind::kPbs) {
    c.modes = {InferenceMode::kPbsDp};
  }

  std::string clip;
  RETURN_IF_ERROR_CFG(r.String("clip_mode", clip));
  if (!clip.empty()) {
    auto mode = ParseClipMode(clip);
    if (!mode.has_value()) {
      return ConfigError("clip_mode", "expected \"clamp\" or \"zero_out\"");
    }
    c.clip_mode = *mode;
  }

  if (const json* pbs = r.Find("pbs")) {
    ObjectReader pr(*pbs, "pbs");
    RETURN_IF_ERROR_CFG(pr.CheckObject());
    RETURN_IF_ERROR_CFG(pr.Int("rounds", c.pbs.rounds));
    RETURN_IF_ERROR_CFG(
        pr.Number("inclusion_probability", c.pbs.inclusion_probability));
    RETURN_IF_ERROR_CFG(pr.Unknown());
    if (c.pbs.rounds < 1) return ConfigError("pbs.rounds", "must be >= 1");
    if (!(c.pbs.inclusion_probability > 0 && c.pbs.inclusion_probability <= 1)) {
      return ConfigError("pbs.inclusion_probability", "must be in (0, 1]");
    }
  }
  RETURN_IF_ERROR_CFG(r.Bool("audit", c.audit));
  if (const json* v = r.Find("converge")) {
    RETURN_IF_ERROR_CFG(ParseConverge(*v, c.converge));
  }
  if (const json* v = r.Find("mia")) RETURN_IF_ERROR_CFG(ParseMia(*v, c.mia));
  if (const json* v = r.Find("compare")) {
    RETURN_IF_ERROR_CFG(ParseCompare(*v, c.compare));
  }
  RETURN_IF_ERROR_CFG(r.String("output", c.output));
  RETURN_IF_ERROR_CFG(r.Unknown());

  for (InferenceMode m : c.modes) {
    if (m == InferenceMode::kPbsDp && c.max_tokens != 1) {
      return ConfigError("modes", "pbs_dp releases one token; set max_tokens 1");
    }
  }
  if (c.provider.kind == ProviderKind::kRemote &&
      c.provider.remote.endpoint.empty() &&
      std::getenv("POETRY_DP_ENDPOINT") == nullptr) {
    return ConfigError("provider.endpoint",
                       "required for a remote provider (or set "
                       "POETRY_DP_ENDPOINT)");
  }
  if (auto task = SyntheticTask::Create(c.task); !task.ok()) {
    return ConfigError("task", std::string(task.status().message()));
  }
  return c;
}

absl::StatusOr<RunConfig> ParseRunConfigText(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return ConfigError("config", "not valid JSON");
  return ParseRunConfig(doc);
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return ConfigError(path, "cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRunConfigText(buffer.str());
}

std::string ConfigHash(const json& doc) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016" PRIx64, HashBytes(doc.dump()));
  return hex;
}

const char* ConfigSchema() {
  return R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "poetry-dp run config",
  "type": "object",
  "additionalProperties": false,
  "required": ["version"],
  "properties": {
    "version": {"const": 1},
    "experiment": {"enum": ["classify", "generate", "pbs", "converge", "mia", "compare_agg", "calibrate"], "default": "classify"},
    "master_seed": {"type": "integer", "minimum": 0, "default": 0,
      "description": "All randomness derives from this value."},
    "seeds": {"oneOf": [
      {"type": "integer", "minimum": 1, "description": "count; seeds 0..n-1"},
      {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1, "uniqueItems": true}],
      "default": 25},
    "queries_per_seed": {"type": "integer", "minimum": 1, "default": 20},
    "provider": {"type": "object", "additionalProperties": false, "properties": {
      "kind": {"enum": ["evidence", "remote"], "default": "evidence"},
      "endpoint": {"type": "string", "description": "http://host:port[/prefix]; POETRY_DP_ENDPOINT overrides"},
      "timeout_ms": {"type": "integer", "minimum": 1, "default": 10000},
      "retries": {"type": "integer", "minimum": 0, "default": 3},
      "backoff_ms": {"type": "integer", "minimum": 0, "default": 50},
      "max_in_flight": {"type": "integer", "minimum": 1, "default": 4},
      "stochastic": {"type": "boolean", "default": false}}},
    "task": {"type": "object", "additionalProperties": false, "properties": {
      "num_classes": {"type": "integer", "minimum": 2, "default": 4},
      "vocab_size": {"type": "integer", "default": 100},
      "topic_words": {"type": "integer", "minimum": 1, "default": 10},
      "topic_mass": {"type": "number", "minimum": 0, "maximum": 1, "default": 0.35},
      "doc_length": {"type": "integer", "minimum": 1, "default": 100},
      "beta": {"type": "number", "minimum": 0, "default": 6},
      "label_noise": {"type": "number", "minimum": 0, "maximum": 1, "default": 0},
      "zero_shot_strength": {"type": "number", "minimum": 0, "default": 0.02},
      "balanced_context": {"type": "boolean", "default": false},
      "label_names": {"type": "array", "items": {"type": "string"}}}},
    "J": {"oneOf": [{"type": "integer", "minimum": 1},
      {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}], "default": [4]},
    "group_size": {"type": "integer", "minimum": 1, "default": 1},
    "gamma": {"type": "number", "exclusiveMinimum": 0, "default": 2},
    "epsilon": {"type": "number", "exclusiveMinimum": 0, "default": 1},
    "delta": {"type": "number", "minimum": 0, "exclusiveMaximum": 1, "default": 1e-5},
    "max_tokens": {"type": "integer", "minimum": 1, "default": 1},
    "composition": {"enum": ["naive", "advanced"],
      "description": "default: advanced when max_tokens > 1 and delta > 0, else naive"},
    "modes": {"type": "array", "minItems": 1, "items": {"enum": [
      "nonprivate_full", "soft_ci_noiseless", "hard_ci_noiseless", "poe_dp", "rnm_dp", "pbs_dp"]},
      "default": ["poe_dp"]},
    "clip_mode": {"enum": ["clamp", "zero_out"], "default": "clamp"},
    "pbs": {"type": "object", "additionalProperties": false, "properties": {
      "rounds": {"type": "integer", "minimum": 1, "default": 100},
      "inclusion_probability": {"type": "number", "exclusiveMinimum": 0, "maximum": 1, "default": 0.5}}},
    "audit": {"type": "boolean", "default": false},
    "converge": {"type": "object", "additionalProperties": false, "properties": {
      "J_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}, "default": [4, 16, 64, 256]},
      "trials": {"type": "integer", "minimum": 10, "default": 50},
      "n_mc": {"type": "integer", "minimum": 1, "default": 400000},
      "planted": {"type": "object", "additionalProperties": false, "properties": {
        "num_classes": {"type": "integer", "default": 4},
        "state_dim": {"type": "integer", "default": 6},
        "view_dim": {"type": "integer", "default": 6},
        "view_noise": {"type": "number", "default": 1},
        "psi_bound": {"type": "number", "default": 1},
        "residual_bound": {"type": "number", "default": 1},
        "constant_psi": {"type": "boolean", "default": false},
        "finite_views": {"type": "integer", "default": 0},
        "uniform_prior": {"type": "boolean", "default": false},
        "seed": {"type": "integer", "minimum": 0, "default": 0}}}}},
    "mia": {"type": "object", "additionalProperties": false, "properties": {
      "seeds": {"type": "integer", "minimum": 1, "default": 50},
      "examples": {"type": "integer", "minimum": 1, "default": 20},
      "repeats": {"type": "integer", "minimum": 1, "default": 1}}},
    "compare": {"type": "object", "additionalProperties": false, "properties": {
      "draws": {"type": "integer", "minimum": 1, "default": 10000},
      "num_classes": {"type": "integer", "minimum": 2, "default": 4},
      "exponent": {"type": "number", "exclusiveMinimum": 0, "default": 1.7},
      "exponent_jitter": {"type": "number", "minimum": 0, "default": 0}}},
    "output": {"type": "string", "description": "JSONL path; --out overrides"}
  }
}
)json";
}

}  // namespace poetry_dp
