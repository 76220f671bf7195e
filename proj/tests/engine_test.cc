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

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "gtest/gtest.h"
#include "poetry_dp/accounting/accounting.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"
#include "poetry_dp/engine/engine.h"
#include "poetry_dp/experts/table_expert.h"
#include "poetry_dp/mechanisms/exponential.h"

namespace poetry_dp {
namespace {

Vocabulary Vocab(int k, bool eos = false) {
  std::vector<std::string> s;
  for (int i = 0; i < k; ++i) s.push_back("c" + std::to_string(i));
  if (eos) return *Vocabulary::Create(s, s.back());
  return *Vocabulary::Create(s);
}

std::vector<double> Logs(std::vector<double> p) {
  for (double& x : p) x = std::log(x);
  return p;
}

ExpertSet Set(std::vector<std::string> payloads, std::size_t g = 1) {
  std::vector<ContextExample> ex;
  for (auto& p : payloads) ex.push_back({p, std::nullopt});
  return *ExpertSet::Create(std::move(ex), g);
}

PrivacyBudget Budget(double sigma, double gamma = 2.0, int tokens = 1) {
  PrivacyBudget b;
  b.epsilon = sigma * tokens;
  b.delta = 1e-5;
  b.max_tokens = tokens;
  b.gamma = gamma;
  b.sigma = sigma;
  return b;
}

GenerationOptions Opts(InferenceMode mode, int tokens = 1) {
  GenerationOptions o;
  o.mode = mode;
  o.max_tokens = tokens;
  return o;
}

// Records the prefix of every call and returns a fixed vector per payload.
class RecordingExpert : public ExpertProvider {
 public:
  RecordingExpert(Vocabulary v, std::vector<double> out)
      : vocab_(std::move(v)), out_(std::move(out)) {}
  const Vocabulary& vocabulary() const override { return vocab_; }
  ProviderDescriptor descriptor() const override { return {"recording"}; }
  std::vector<std::size_t> prefix_lengths;
  std::string fail_on;

 protected:
  absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token> prefix, const std::string&,
      std::span<const ContextExample> group) override {
    prefix_lengths.push_back(prefix.size());
    if (!group.empty() && group.front().payload == fail_on) {
      return MakeError(ErrorKind::kTransport, "down");
    }
    return out_;
  }
  absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token> prefix, const std::string& q,
      std::span<const ContextExample> ex) override {
    return DoQuery(prefix, q, ex);
  }

 private:
  Vocabulary vocab_;
  std::vector<double> out_;
};

TEST(GenerateTest, LargeSigmaPoeFollowsExpert) {
  TableExpert e(Vocab(2), {{"a", Logs({0.9, 0.1})}});
  const auto set = Set({"a"});
  // Oracle: clipped utilities (ln 0.9, -2) at sigma 50, Delta 2.
  const double oracle =
      1.0 / (1.0 + std::exp(50.0 * (-2.0 - std::log(0.9)) / 4.0));
  EXPECT_GT(oracle, 0.95);
  RngStream rng(1, 1);
  int zeros = 0;
  for (int i = 0; i < 1000; ++i) {
    RngStream r = rng.Derive(i);
    auto rec = Generate("q", set, e, Budget(50), Opts(InferenceMode::kPoeDp), r);
    ASSERT_TRUE(rec.ok());
    zeros += rec->tokens[0].id == 0;
  }
  EXPECT_GT(zeros, 950);
}

TEST(GenerateTest, NoiselessModesOnSectionExample) {
  TableExpert e(Vocab(2), {{"a", Logs({0.6, 0.4})}, {"b", Logs({0.7, 0.3})}});
  const auto set = Set({"a", "b"});
  RngStream rng(0, 0);
  GenerationOptions soft = Opts(InferenceMode::kSoftCiNoiseless);
  soft.audit = true;
  auto s = Generate("q", set, e, Budget(1), soft, rng);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->tokens[0].id, 0u);
  EXPECT_NEAR(s->audit[0].values[0], std::log(0.42), 1e-12);
  EXPECT_NEAR(s->audit[0].values[1], std::log(0.12), 1e-12);
  GenerationOptions hard = Opts(InferenceMode::kHardCiNoiseless);
  hard.audit = true;
  auto h = Generate("q", set, e, std::nullopt, hard, rng);
  ASSERT_TRUE(h.ok());
  EXPECT_EQ(h->tokens[0].id, 0u);
  EXPECT_EQ(h->audit[0].values, (std::vector<double>{2, 0}));
}

TEST(GenerateTest, ZeroTokensIsEmpty) {
  TableExpert e(Vocab(2), {{"a", Logs({0.6, 0.4})}});
  RngStream rng(0, 0);
  auto r = Generate("q", Set({"a"}), e, Budget(1), Opts(InferenceMode::kPoeDp, 0), rng);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->tokens.empty());
  EXPECT_EQ(r->expert_calls, 0u);
}

TEST(GenerateTest, PrivateModesNeedSigma) {
  TableExpert e(Vocab(2), {{"a", Logs({0.6, 0.4})}});
  RngStream rng(0, 0);
  for (auto mode : {InferenceMode::kPoeDp, InferenceMode::kRnmDp, InferenceMode::kPbsDp}) {
    auto r = Generate("q", Set({"a"}), e, std::nullopt, Opts(mode), rng);
    EXPECT_TRUE(HasErrorKind(r.status(), ErrorKind::kBudgetUnset));
  }
  PrivacyBudget unset = Budget(1);
  unset.sigma.reset();
  EXPECT_TRUE(HasErrorKind(
      Generate("q", Set({"a"}), e, unset, Opts(InferenceMode::kPoeDp), rng).status(),
      ErrorKind::kBudgetUnset));
}

TEST(GenerateTest, CallPatternIsOnePerGroupPerToken) {
  RecordingExpert e(Vocab(3), Logs({0.5, 0.3, 0.2}));
  const auto set = Set({"a", "b", "c", "d", "e"}, 2);
  RngStream rng(4, 4);
  auto r = Generate("q", set, e, Budget(1, 2, 3), Opts(InferenceMode::kPoeDp, 3), rng);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(e.query_calls(), 9u);  // ceil(5/2) * 3
  EXPECT_EQ(r->expert_calls, 9u);
  EXPECT_EQ(e.prefix_lengths,
            (std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 2, 2, 2}));
}

TEST(GenerateTest, NonprivatePrefixDisciplineAndOneCallPerToken) {
  RecordingExpert e(Vocab(3), Logs({0.5, 0.3, 0.2}));
  RngStream rng(4, 4);
  auto r = Generate("q", Set({"a", "b"}), e, std::nullopt,
                    Opts(InferenceMode::kNonprivateFull, 2), rng);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(e.full_context_calls(), 2u);
  EXPECT_EQ(e.query_calls(), 0u);
  EXPECT_EQ(e.prefix_lengths, (std::vector<std::size_t>{0, 1}));
}

TEST(GenerateTest, NonprivateSamplesFullContextDistribution) {
  TableExpert e(Vocab(3), {{"a", Logs({0.5, 0.3, 0.2})}, {"b", Logs({0.2, 0.3, 0.5})}});
  const auto set = Set({"a", "b"});
  // Oracle: product of experts renormalized = (0.1, 0.09, 0.1) / 0.29.
  const std::vector<double> oracle = {0.1 / 0.29, 0.09 / 0.29, 0.1 / 0.29};
  auto exact = ClassifyDistribution("q", set, e, std::nullopt,
                                    Opts(InferenceMode::kNonprivateFull));
  ASSERT_TRUE(exact.ok());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR((*exact)[i], oracle[i], 1e-12);
  std::vector<int> counts(3, 0);
  RngStream rng(5, 5);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    RngStream r = rng.Derive(i);
    ++counts[Classify("q", set, e, std::nullopt, Opts(InferenceMode::kNonprivateFull), r)->id];
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(counts[i] / double(n), oracle[i], 0.006);
}

TEST(GenerateTest, StopsAtEndOfSequence) {
  // Last vocabulary entry is EOS and dominates.
  TableExpert e(Vocab(3, true), {{"a", Logs({0.05, 0.05, 0.9})}});
  RngStream rng(0, 0);
  auto r = Generate("q", Set({"a"}), e, std::nullopt,
                    Opts(InferenceMode::kSoftCiNoiseless, 5), rng);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->tokens.size(), 1u);
  EXPECT_TRUE(r->stopped_early);
  GenerationOptions keep = Opts(InferenceMode::kSoftCiNoiseless, 5);
  keep.stop_at_eos = false;
  EXPECT_EQ(Generate("q", Set({"a"}), e, std::nullopt, keep, rng)->tokens.size(), 5u);
}

TEST(GenerateTest, ProviderFailureNamesStepAndGroup) {
  RecordingExpert e(Vocab(2), Logs({0.5, 0.5}));
  e.fail_on = "b";
  RngStream rng(0, 0);
  auto r = Generate("q", Set({"a", "b"}), e, Budget(1), Opts(InferenceMode::kPoeDp), rng);
  EXPECT_TRUE(HasErrorKind(r.status(), ErrorKind::kProviderFailure));
  EXPECT_NE(std::string(r.status().message()).find("step 0, group 1"), std::string::npos);
  EXPECT_NE(std::string(r.status().message()).find("Transport"), std::string::npos);
}

TEST(GenerateTest, RejectsOutOfVocabularyLabels) {
  TableExpert e(Vocab(2), {{"a", Logs({0.5, 0.5})}});
  auto set = *ExpertSet::Create({{"a", Token{7, std::nullopt}}}, 1);
  RngStream rng(0, 0);
  EXPECT_TRUE(HasErrorKind(
      Generate("q", set, e, Budget(1), Opts(InferenceMode::kPoeDp), rng).status(),
      ErrorKind::kInvalidArgument));
}

TEST(GenerateTest, DeterministicForSameStream) {
  TableExpert e(Vocab(4), {{"a", Logs({0.4, 0.3, 0.2, 0.1})}, {"b", Logs({0.1, 0.2, 0.3, 0.4})}});
  const auto set = Set({"a", "b"});
  for (auto mode : {InferenceMode::kPoeDp, InferenceMode::kRnmDp, InferenceMode::kNonprivateFull}) {
    RngStream r1(9, 9), r2(9, 9);
    auto a = Generate("q", set, e, Budget(0.5, 2, 6), Opts(mode, 6), r1);
    auto b = Generate("q", set, e, Budget(0.5, 2, 6), Opts(mode, 6), r2);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_EQ(a->tokens, b->tokens);
  }
}

TEST(ClassifyTest, DelegatesToGenerate) {
  TableExpert e(Vocab(4), {{"a", Logs({0.4, 0.3, 0.2, 0.1})}});
  for (uint64_t s = 0; s < 50; ++s) {
    RngStream r1(s, 1), r2(s, 1);
    auto g = Generate("q", Set({"a"}), e, Budget(1), Opts(InferenceMode::kPoeDp), r1);
    auto c = Classify("q", Set({"a"}), e, Budget(1), Opts(InferenceMode::kPoeDp, 7), r2);
    EXPECT_EQ(g->tokens[0], *c);
  }
}

TEST(ClassifyTest, NaiveBudgetPassesSigmaThrough) {
  auto b = MakeBudget(4.0, 1e-5, 1, 2.0, CompositionMode::kNaive);
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->sigma, 4.0);
  TableExpert e(Vocab(2), {{"a", Logs({0.6, 0.4})}});
  RngStream rng(0, 0);
  auto r = Generate("q", Set({"a"}), e, *b, Opts(InferenceMode::kPoeDp), rng);
  EXPECT_EQ(r->budget->sigma, 4.0);
}

TEST(ClassifyTest, UniformExpertsGiveUniformLabels) {
  TableExpert e(Vocab(4), {{"a", Logs({0.25, 0.25, 0.25, 0.25})},
                           {"b", Logs({0.25, 0.25, 0.25, 0.25})}});
  const auto set = Set({"a", "b"});
  std::vector<int> counts(4, 0);
  RngStream rng(3, 3);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    RngStream r = rng.Derive(i);
    ++counts[Classify("q", set, e, Budget(1), Opts(InferenceMode::kPoeDp), r)->id];
  }
  for (int c : counts) EXPECT_NEAR(c / double(n), 0.25, 0.01);
}

TEST(ModeEquivalenceTest, HugeSigmaMatchesNoiseless) {
  RngStream gen(77, 0);
  int rnm_checked = 0, poe_checked = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    const int k = 2 + static_cast<int>(gen.UniformInt(4));
    const int j = 1 + static_cast<int>(gen.UniformInt(5));
    std::map<std::string, std::vector<double>> table;
    std::vector<std::string> payloads;
    for (int x = 0; x < j; ++x) {
      std::vector<double> p(k);
      for (double& v : p) v = gen.UniformOpen();
      payloads.push_back("e" + std::to_string(x));
      table[payloads.back()] = Logs(p);  // unnormalized is fine here
    }
    TableExpert e(Vocab(k), table);
    const auto set = Set(payloads);
    RngStream r(inst, 1);
    GenerationOptions soft = Opts(InferenceMode::kSoftCiNoiseless);
    soft.audit = true;
    auto s = Generate("q", set, e, std::nullopt, soft, r);
    const auto& u = s->audit[0].values;
    const double best = u[ArgmaxLowestIndex(u)];
    if (std::count(u.begin(), u.end(), best) == 1) {
      auto poe = Classify("q", set, e, Budget(1e6), Opts(InferenceMode::kPoeDp), r);
      ASSERT_EQ(s->tokens[0].id, poe->id) << "instance " << inst;
      ++poe_checked;
    }

    GenerationOptions hard = Opts(InferenceMode::kHardCiNoiseless);
    hard.audit = true;
    auto h = Generate("q", set, e, std::nullopt, hard, r);
    const auto& votes = h->audit[0].values;
    const double top = votes[ArgmaxLowestIndex(votes)];
    if (std::count(votes.begin(), votes.end(), top) > 1) continue;  // tied leaders
    auto rnm = Classify("q", set, e, Budget(1e6), Opts(InferenceMode::kRnmDp), r);
    ASSERT_EQ(h->tokens[0].id, rnm->id) << "instance " << inst;
    ++rnm_checked;
  }
  EXPECT_GT(poe_checked, 900);
  EXPECT_GT(rnm_checked, 500);
}

// Adjacent expert sets: one example's output replaced. Grid over [-2, 0].
TEST(EndToEndDpTest, ExactRatioBoundOnGrid) {
  const std::vector<double> grid = {-2.0, -1.0, 0.0};
  std::vector<std::vector<double>> outputs;
  for (double a : grid) for (double b : grid) outputs.push_back({a, b});
  std::map<std::string, std::vector<double>> table;
  for (std::size_t i = 0; i < outputs.size(); ++i) table["o" + std::to_string(i)] = outputs[i];
  TableExpert e(Vocab(2), table);
  const double sigma = 0.7;
  double worst = 0.0;
  for (auto mode : {InferenceMode::kPoeDp, InferenceMode::kRnmDp}) {
    for (std::size_t x = 0; x < outputs.size(); ++x) {
      for (std::size_t y = 0; y < outputs.size(); ++y) {
        for (std::size_t y2 = 0; y2 < outputs.size(); ++y2) {
          auto p = ClassifyDistribution("q", Set({"o" + std::to_string(x), "o" + std::to_string(y)}),
                                        e, Budget(sigma), Opts(mode));
          auto p2 = ClassifyDistribution("q", Set({"o" + std::to_string(x), "o" + std::to_string(y2)}),
                                         e, Budget(sigma), Opts(mode));
          ASSERT_TRUE(p.ok() && p2.ok());
          for (int c = 0; c < 2; ++c) {
            worst = std::max(worst, std::abs(std::log((*p)[c]) - std::log((*p2)[c])));
          }
        }
      }
    }
  }
  EXPECT_LE(worst, sigma + 1e-9);
  EXPECT_GT(worst, 0.5 * sigma);  // the bound is not vacuous
}

TEST(PbsTest, SingleFullRoundIsOneNoisyVote) {
  RecordingExpert e(Vocab(3), Logs({0.5, 0.3, 0.2}));
  const auto set = Set({"a", "b", "c"});
  PbsConfig cfg{1, 1.0};
  RngStream rng(1, 1);
  auto out = PbsClassify("q", set, e, Budget(1), cfg, ClipMode::kClamp, rng);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->full_context_calls, 1u);
  EXPECT_EQ(out->total_subset_size, 3u);
  EXPECT_DOUBLE_EQ(std::accumulate(out->votes.begin(), out->votes.end(), 0.0), 1.0);
  EXPECT_NEAR(out->budget.per_round_epsilon, 1.0, 1e-9);
}

TEST(PbsTest, DefaultSettingsCallCountsAndSubsetSize) {
  RecordingExpert e(Vocab(3), Logs({0.5, 0.3, 0.2}));
  std::vector<std::string> payloads;
  for (int i = 0; i < 10; ++i) payloads.push_back("x" + std::to_string(i));
  const auto set = Set(payloads);
  uint64_t subset = 0, calls = 0;
  const int queries = 20;
  for (int q = 0; q < queries; ++q) {
    RngStream rng(q, 2);
    auto out = PbsClassify("q", set, e, Budget(1), PbsConfig{}, ClipMode::kClamp, rng);
    ASSERT_TRUE(out.ok());
    calls += out->full_context_calls;
    subset += out->total_subset_size;
  }
  EXPECT_EQ(calls, 100u * queries);
  // Mean subset size J*q = 5; sd of the mean over 2000 rounds ~ 0.035.
  EXPECT_NEAR(static_cast<double>(subset) / calls, 5.0, 0.15);
}

TEST(PbsTest, SingleFullRoundMatchesClosedForm) {
  TableExpert e(Vocab(3), {{"a", Logs({0.6, 0.3, 0.1})}});
  const auto set = Set({"a"});
  PbsConfig cfg{1, 1.0};
  // Clipped utilities (ln .6, ln .3, -2), delta = gamma = 2, sigma = 1.
  const double w[3] = {std::exp(std::log(0.6) / 4), std::exp(std::log(0.3) / 4),
                       std::exp(-2.0 / 4)};
  const double z = w[0] + w[1] + w[2];
  int counts[3] = {0, 0, 0};
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    RngStream rng(i, 4);
    auto out = PbsClassify("q", set, e, Budget(1), cfg, ClipMode::kClamp, rng);
    ASSERT_TRUE(out.ok());
    ++counts[out->label.id];
  }
  for (int y = 0; y < 3; ++y) {
    const double p = w[y] / z;
    EXPECT_NEAR(counts[y] / double(n), p, 4 * std::sqrt(p * (1 - p) / n)) << y;
  }
}

TEST(PbsTest, PeakedExpertsWinWithLargeBudget) {
  TableExpert e(Vocab(4), {{"a", Logs({0.01, 0.97, 0.01, 0.01})}},
                Logs({0.25, 0.25, 0.25, 0.25}));
  const auto set = Set({"a", "a", "a", "a"});
  // eps = 200 over 100 rounds leaves about 1.55 per round, so the peaked
  // class takes ~42% of votes against ~19% for each other class.
  int hits = 0;
  for (int i = 0; i < 200; ++i) {
    RngStream rng(i, 3);
    GenerationOptions o = Opts(InferenceMode::kPbsDp);
    auto t = Classify("q", set, e, Budget(200), o, rng);
    ASSERT_TRUE(t.ok());
    hits += t->id == 1;
  }
  EXPECT_GE(hits, 199);
}

TEST(PbsTest, SingleTokenOnly) {
  TableExpert e(Vocab(2), {{"a", Logs({0.5, 0.5})}});
  RngStream rng(0, 0);
  EXPECT_TRUE(HasErrorKind(
      Generate("q", Set({"a"}), e, Budget(1), Opts(InferenceMode::kPbsDp, 2), rng).status(),
      ErrorKind::kInvalidArgument));
  EXPECT_FALSE(ClassifyDistribution("q", Set({"a"}), e, Budget(1),
                                    Opts(InferenceMode::kPbsDp)).ok());
}

TEST(ModeNamesTest, RoundTrip) {
  for (auto m : {InferenceMode::kNonprivateFull, InferenceMode::kSoftCiNoiseless,
                 InferenceMode::kHardCiNoiseless, InferenceMode::kPoeDp,
                 InferenceMode::kRnmDp, InferenceMode::kPbsDp}) {
    EXPECT_EQ(ParseInferenceMode(InferenceModeName(m)), m);
  }
  EXPECT_FALSE(ParseInferenceMode("poe").has_value());
  EXPECT_TRUE(IsPrivate(InferenceMode::kRnmDp));
  EXPECT_FALSE(IsPrivate(InferenceMode::kSoftCiNoiseless));
}

}  // namespace
}  // namespace poetry_dp
