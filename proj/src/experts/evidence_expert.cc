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

#include "poetry_dp/experts/evidence_expert.h"

#include <cmath>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"

namespace poetry_dp {

absl::StatusOr<SyntheticTask> SyntheticTask::Create(SyntheticTaskConfig config) {
  if (config.num_classes < 2) {
    return MakeError(ErrorKind::kInvalidArgument, "need at least two classes");
  }
  if (config.topic_words < 1 ||
      config.num_classes * config.topic_words > config.vocab_size) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "topic blocks must fit in the vocabulary");
  }
  if (!(config.topic_mass >= 0 && config.topic_mass <= 1)) {
    return MakeError(ErrorKind::kInvalidArgument, "topic_mass must be in [0,1]");
  }
  if (config.doc_length < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "doc_length must be >= 1");
  }
  if (!(config.beta >= 0)) {
    return MakeError(ErrorKind::kInvalidArgument, "beta must be >= 0");
  }
  if (!(config.zero_shot_strength >= 0)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "zero_shot_strength must be >= 0");
  }
  if (!(config.label_noise >= 0 && config.label_noise <= 1)) {
    return MakeError(ErrorKind::kInvalidArgument, "label_noise must be in [0,1]");
  }
  if (config.label_names.empty()) {
    for (int c = 0; c < config.num_classes; ++c) {
      config.label_names.push_back(absl::StrCat("label_", c));
    }
  }
  if (static_cast<int>(config.label_names.size()) != config.num_classes) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "label_names must have num_classes entries");
  }
  auto vocab = Vocabulary::Create(config.label_names);
  if (!vocab.ok()) return vocab.status();

  SyntheticTask task;
  task.config_ = config;
  task.vocabulary_ = *std::move(vocab);
  task.log_prior_.assign(config.num_classes, -std::log(config.num_classes));
  const double background = (1.0 - config.topic_mass) / config.vocab_size;
  const double topic = config.topic_mass / config.topic_words;
  for (int c = 0; c < config.num_classes; ++c) {
    std::vector<double> p(config.vocab_size, background);
    for (int w = 0; w < config.topic_words; ++w) {
      p[c * config.topic_words + w] += topic;
    }
    task.profiles_.push_back(std::move(p));
  }
  return task;
}

LabeledDocument SyntheticTask::SampleOfClass(std::size_t c,
                                             RngStream& rng) const {
  LabeledDocument doc;
  doc.true_class = c;
  doc.label = c;
  for (int i = 0; i < config_.doc_length; ++i) {
    int word;
    if (rng.Uniform() < config_.topic_mass) {
      word = static_cast<int>(c) * config_.topic_words +
             static_cast<int>(rng.UniformInt(config_.topic_words));
    } else {
      word = static_cast<int>(rng.UniformInt(config_.vocab_size));
    }
    if (i > 0) doc.payload += ' ';
    absl::StrAppend(&doc.payload, "w", word);
  }
  if (config_.label_noise > 0 && rng.Uniform() < config_.label_noise) {
    const std::size_t shift = 1 + rng.UniformInt(num_classes() - 1);
    doc.label = (c + shift) % num_classes();
  }
  return doc;
}

LabeledDocument SyntheticTask::Sample(RngStream& rng) const {
  return SampleOfClass(rng.UniformInt(num_classes()), rng);
}

std::vector<double> SyntheticTask::ZeroShotLogProbs(
    const std::map<int, double>& counts) const {
  std::vector<double> logits = log_prior_;
  if (config_.zero_shot_strength > 0) {
    for (std::size_t c = 0; c < logits.size(); ++c) {
      double ll = 0.0;
      for (const auto& [w, n] : counts) {
        if (w >= 0 && w < config_.vocab_size) ll += n * std::log(profiles_[c][w]);
      }
      logits[c] += config_.zero_shot_strength * ll;
    }
  }
  const double z = LogSumExp(logits);
  for (double& x : logits) x -= z;
  return logits;
}

ContextExample SyntheticTask::ToExample(const LabeledDocument& doc) const {
  return ContextExample{doc.payload,
                        Token{doc.label, vocabulary_.surface(doc.label)}};
}

std::map<int, double> WordCounts(const std::string& payload) {
  std::map<int, double> counts;
  std::size_t pos = 0;
  while (pos < payload.size()) {
    std::size_t end = payload.find_first_of(" \n\t", pos);
    if (end == std::string::npos) end = payload.size();
    if (end > pos + 1 && payload[pos] == 'w') {
      char* parse_end = nullptr;
      const std::string word = payload.substr(pos + 1, end - pos - 1);
      const long id = std::strtol(word.c_str(), &parse_end, 10);
      if (parse_end != nullptr && *parse_end == '\0') counts[id] += 1.0;
    }
    pos = end + 1;
  }
  return counts;
}

double CosineSimilarity(const std::map<int, double>& a,
                        const std::map<int, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [w, c] : a) {
    na += c * c;
    auto it = b.find(w);
    if (it != b.end()) dot += c * it->second;
  }
  for (const auto& [w, c] : b) nb += c * c;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

EvidenceExpert::EvidenceExpert(const SyntheticTask& task) : task_(task) {}

std::vector<double> EvidenceExpert::GroupLogProbs(
    const std::map<int, double>& query_counts,
    std::span<const ContextExample> group) const {
  std::vector<double> logits = task_.ZeroShotLogProbs(query_counts);
  for (const auto& ex : group) {
    if (!ex.label.has_value() || ex.label->id >= logits.size()) continue;
    logits[ex.label->id] +=
        task_.config().beta * CosineSimilarity(query_counts, WordCounts(ex.payload));
  }
  const double z = LogSumExp(logits);
  for (double& x : logits) x -= z;
  return logits;
}

absl::StatusOr<std::vector<double>> EvidenceExpert::DoQuery(
    std::span<const Token> /*prefix*/, const std::string& query,
    std::span<const ContextExample> group) {
  return GroupLogProbs(WordCounts(query), group);
}

absl::StatusOr<std::vector<double>> EvidenceExpert::DoFullContext(
    std::span<const Token> /*prefix*/, const std::string& query,
    std::span<const ContextExample> examples) {
  const auto query_counts = WordCounts(query);
  if (examples.empty()) return GroupLogProbs(query_counts, examples);
  std::vector<double> logits(task_.num_classes(), 0.0);
  for (std::size_t j = 0; j < examples.size(); ++j) {
    const auto l = GroupLogProbs(query_counts, examples.subspan(j, 1));
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] += l[i];
  }
  const double z = LogSumExp(logits);
  for (double& x : logits) x -= z;
  return logits;
}

}  // namespace poetry_dp
