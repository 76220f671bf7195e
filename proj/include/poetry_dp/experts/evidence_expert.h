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

#ifndef POETRY_DP_EXPERTS_EVIDENCE_EXPERT_H_
#define POETRY_DP_EXPERTS_EVIDENCE_EXPERT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/core/rng.h"
#include "poetry_dp/experts/provider.h"

namespace poetry_dp {

// Desk-scale stand-in for a topic classification dataset. Each class owns a
// disjoint block of `topic_words` words; a document of `doc_length` words
// draws each word from its class block with probability `topic_mass` and
// from the whole vocabulary otherwise.
struct SyntheticTaskConfig {
  int num_classes = 4;
  int vocab_size = 100;
  int topic_words = 10;
  double topic_mass = 0.35;
  int doc_length = 100;
  // Sharpness of the evidence each example contributes, see EvidenceExpert.
  double beta = 6.0;
  // Probability that a recorded label is replaced by a different class.
  double label_noise = 0.0;
  // Weight of the query's own class likelihood in the zero-shot prior; 0
  // gives the flat prior.
  double zero_shot_strength = 0.02;
  // Context example i is drawn from class i mod K instead of the prior.
  bool balanced_context = false;
  std::vector<std::string> label_names;  // defaults to label_0..label_{K-1}
};

struct LabeledDocument {
  std::string payload;
  std::size_t label = 0;       // recorded (possibly noisy) label
  std::size_t true_class = 0;  // class the words were drawn from
};

class SyntheticTask {
 public:
  static absl::StatusOr<SyntheticTask> Create(SyntheticTaskConfig config);

  const SyntheticTaskConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t num_classes() const { return vocabulary_.size(); }
  const std::vector<double>& log_prior() const { return log_prior_; }
  // Zero-shot log p(y | x): log prior + zero_shot_strength * naive-Bayes
  // log-likelihood of the query words, normalized.
  std::vector<double> ZeroShotLogProbs(const std::map<int, double>& counts) const;

  // Word distribution of one class; sums to 1.
  const std::vector<double>& profile(std::size_t c) const { return profiles_[c]; }

  // Class drawn from the prior, words from its profile. Labels are not
  // balanced across draws.
  LabeledDocument Sample(RngStream& rng) const;
  LabeledDocument SampleOfClass(std::size_t c, RngStream& rng) const;

  ContextExample ToExample(const LabeledDocument& doc) const;

 private:
  SyntheticTask() = default;

  SyntheticTaskConfig config_;
  Vocabulary vocabulary_ = *Vocabulary::Create({"a", "b"});
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> profiles_;
};

// Word-count vector of a "w<i> w<j> ..." payload; unknown words are ignored.
std::map<int, double> WordCounts(const std::string& payload);
double CosineSimilarity(const std::map<int, double>& a,
                        const std::map<int, double>& b);

// Each context example is soft evidence for its own label:
//   p(y | x, C_j) proportional to prior(y | x) * exp(beta * sim(x, C_j) * [y = label_j])
// with sim the cosine similarity of word counts. A group multiplies the
// evidence of its members. prior(y | x) is SyntheticTask::ZeroShotLogProbs.
// FullContext is the unclipped product of the per-example distributions (the
// non-private reference); with no examples it returns the prior.
class EvidenceExpert : public ExpertProvider {
 public:
  explicit EvidenceExpert(const SyntheticTask& task);

  const Vocabulary& vocabulary() const override { return task_.vocabulary(); }
  ProviderDescriptor descriptor() const override { return {"evidence"}; }

 protected:
  absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> group) override;
  absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> examples) override;

 private:
  std::vector<double> GroupLogProbs(const std::map<int, double>& query_counts,
                                    std::span<const ContextExample> group) const;

  SyntheticTask task_;
};

}  // namespace poetry_dp

#endif  // POETRY_DP_EXPERTS_EVIDENCE_EXPERT_H_
