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
#include <memory>

#include "gtest/gtest.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"
#include "poetry_dp/core/rng.h"
#include "poetry_dp/experts/evidence_expert.h"
#include "poetry_dp/experts/planted_model.h"
#include "poetry_dp/experts/powerlaw_expert.h"
#include "poetry_dp/experts/table_expert.h"

namespace poetry_dp {
namespace {

Vocabulary Vocab(int k) {
  std::vector<std::string> s;
  for (int i = 0; i < k; ++i) s.push_back("c" + std::to_string(i));
  return *Vocabulary::Create(s);
}

// Returns whatever vector it was given; for provider-contract tests.
class FixedProvider : public ExpertProvider {
 public:
  FixedProvider(Vocabulary v, std::vector<double> out)
      : vocab_(std::move(v)), out_(std::move(out)) {}
  const Vocabulary& vocabulary() const override { return vocab_; }
  ProviderDescriptor descriptor() const override { return {"fixed"}; }

 protected:
  absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token>, const std::string&,
      std::span<const ContextExample>) override {
    return out_;
  }
  absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token>, const std::string&,
      std::span<const ContextExample>) override {
    return out_;
  }

 private:
  Vocabulary vocab_;
  std::vector<double> out_;
};

TEST(ProviderContractTest, ValidatesOutputs) {
  FixedProvider ok(Vocab(2), {1e-12, -1.0});
  auto v = ok.Query({}, "q", {});
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->values(), (std::vector<double>{0.0, -1.0}));
  EXPECT_EQ(ok.query_calls(), 1u);

  FixedProvider positive(Vocab(2), {0.3, -1.0});
  EXPECT_TRUE(HasErrorKind(positive.Query({}, "q", {}).status(),
                           ErrorKind::kPositiveLogProb));
  FixedProvider arity(Vocab(3), {-1.0, -1.0});
  EXPECT_TRUE(HasErrorKind(arity.FullContext({}, "q", {}).status(),
                           ErrorKind::kWrongArity));
  FixedProvider nan(Vocab(2), {std::nan(""), -1.0});
  EXPECT_TRUE(HasErrorKind(nan.Query({}, "q", {}).status(), ErrorKind::kNonFinite));
  EXPECT_EQ(nan.query_calls(), 1u);
  EXPECT_EQ(arity.full_context_calls(), 1u);
}

TEST(ProviderHelpersTest, JoinAndDigest) {
  std::vector<ContextExample> ex = {{"a", std::nullopt}, {"b", std::nullopt}};
  EXPECT_EQ(JoinPayloads(ex), "a\n\nb");
  EXPECT_EQ(DigestCall({}, "q", ex), DigestCall({}, "q", ex));
  EXPECT_NE(DigestCall({}, "q", ex), DigestCall({}, "r", ex));
}

TEST(ZipfTest, TwoClassOracle) {
  // r^-s with s = log2(3) gives weights 1 and 1/3, normalized (0.75, 0.25).
  auto p = ZipfProbabilities(2, std::log2(3.0));
  EXPECT_NEAR(p[0], 0.75, 1e-12);
  EXPECT_NEAR(p[1], 0.25, 1e-12);
}

TEST(ZipfTest, FlatLimitAndMonotoneTopMass) {
  for (double x : ZipfProbabilities(5, 1e-12)) EXPECT_NEAR(x, 0.2, 1e-10);
  double prev = 1.0;
  for (double s : {3.0, 2.0, 1.0, 0.5, 0.1}) {
    const double top = ZipfProbabilities(6, s)[0];
    EXPECT_LT(top, prev);
    prev = top;
  }
}

TEST(PowerLawExpertTest, OutputsArePermutedZipfLogs) {
  PowerLawConfig cfg;
  cfg.exponent = std::log2(3.0);
  auto e = PowerLawExpert::Create(Vocab(2), cfg);
  ASSERT_TRUE(e.ok());
  auto v = (*e)->Query({}, "query", std::vector<ContextExample>{{"x", std::nullopt}});
  ASSERT_TRUE(v.ok());
  std::vector<double> p = {std::exp((*v)[0]), std::exp((*v)[1])};
  std::sort(p.begin(), p.end());
  EXPECT_NEAR(p[0], 0.25, 1e-12);
  EXPECT_NEAR(p[1], 0.75, 1e-12);
}

TEST(PowerLawExpertTest, DeterministicAndValidated) {
  PowerLawConfig cfg;
  cfg.exponent_jitter = 0.3;
  cfg.seed = 9;
  auto a = PowerLawExpert::Create(Vocab(5), cfg);
  auto b = PowerLawExpert::Create(Vocab(5), cfg);
  for (uint64_t d = 0; d < 20; ++d) {
    EXPECT_EQ((*a)->Probabilities(d), (*b)->Probabilities(d));
  }
  cfg.exponent = 0;
  EXPECT_FALSE(PowerLawExpert::Create(Vocab(5), cfg).ok());
}

TEST(PlantedModelTest, ConstantPsiNoResidualHitsLimitExactly) {
  PlantedModelConfig cfg;
  cfg.constant_psi = true;
  cfg.residual_bound = 0.0;
  auto m = PlantedModel::Create(cfg);
  ASSERT_TRUE(m.ok());
  RngStream rng(1, 2);
  const auto limit = m->LimitDistribution(1000, rng);
  for (std::size_t j : {1, 4, 16}) {
    const auto views = m->SampleViews(j, rng);
    const auto p = m->FullContextDistribution(views);
    for (std::size_t y = 0; y < p.size(); ++y) EXPECT_NEAR(p[y], limit[y], 1e-12);
  }
}

TEST(PlantedModelTest, SingleViewLogitsArePsi) {
  PlantedModelConfig cfg;
  cfg.residual_bound = 0.0;
  auto m = PlantedModel::Create(cfg);
  RngStream rng(3, 4);
  const auto views = m->SampleViews(1, rng);
  const auto logits = m->FullContextLogits(views);
  for (std::size_t y = 0; y < logits.size(); ++y) {
    EXPECT_DOUBLE_EQ(logits[y], m->Psi(y, views[0]));
  }
}

TEST(PlantedModelTest, BoundsHold) {
  PlantedModelConfig cfg;
  cfg.psi_bound = 0.7;
  cfg.residual_bound = 0.4;
  auto m = PlantedModel::Create(cfg);
  RngStream rng(5, 6);
  for (int t = 0; t < 200; ++t) {
    const auto views = m->SampleViews(1 + t % 9, rng);
    for (std::size_t y = 0; y < m->num_classes(); ++y) {
      EXPECT_LE(std::abs(m->Psi(y, views[0])), 0.7);
      EXPECT_LE(std::abs(m->Residual(y, views)), 0.4);
    }
  }
}

TEST(PlantedModelTest, FiniteViewsEnumerationMatchesMonteCarlo) {
  PlantedModelConfig cfg;
  cfg.finite_views = 3;
  auto m = PlantedModel::Create(cfg);
  auto exact = m->ExactExpectedPsi();
  ASSERT_TRUE(exact.ok());
  RngStream rng(7, 8);
  const PsiEstimate mc = m->MonteCarloPsi(200000, rng);
  for (std::size_t y = 0; y < exact->size(); ++y) {
    EXPECT_LE(std::abs(mc.mean[y] - (*exact)[y]), 3 * mc.standard_error[y] + 1e-12);
  }
  PlantedModelConfig gaussian;
  EXPECT_FALSE(PlantedModel::Create(gaussian)->ExactExpectedPsi().ok());
}

TEST(PlantedModelTest, VanishingPsiGivesPrior) {
  PlantedModelConfig cfg;
  cfg.psi_bound = 1e-13;
  auto m = PlantedModel::Create(cfg);
  RngStream rng(9, 9);
  const auto limit = m->LimitDistribution(1000, rng);
  const auto prior = LogNormalize(m->log_prior());
  for (std::size_t y = 0; y < limit.size(); ++y) EXPECT_NEAR(limit[y], prior[y], 1e-11);
}

TEST(PlantedModelTest, UniformPriorEqualPsiGivesUniform) {
  PlantedModelConfig cfg;
  cfg.uniform_prior = true;
  auto m = PlantedModel::Create(cfg);
  for (double p : m->LimitFromPsi(std::vector<double>{0.3, 0.3, 0.3, 0.3})) {
    EXPECT_NEAR(p, 0.25, 1e-15);
  }
}

TEST(PlantedModelTest, ViewPayloadRoundTrip) {
  const std::vector<double> v = {0.125, -3.5, 1e-7};
  auto back = DecodeView(EncodeView(v));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, v);
  EXPECT_FALSE(DecodeView("nonsense").ok());
}

TEST(PlantedModelTest, Validation) {
  PlantedModelConfig cfg;
  cfg.num_classes = 1;
  EXPECT_FALSE(PlantedModel::Create(cfg).ok());
  cfg = {};
  cfg.psi_bound = 0;
  EXPECT_FALSE(PlantedModel::Create(cfg).ok());
}

TEST(PlantedViewExpertTest, FullContextMatchesModel) {
  auto model = std::make_shared<const PlantedModel>(*PlantedModel::Create({}));
  PlantedViewExpert expert(model);
  RngStream rng(11, 12);
  const auto views = model->SampleViews(5, rng);
  std::vector<ContextExample> ex;
  for (const auto& v : views) ex.push_back({EncodeView(v), std::nullopt});
  auto l = expert.FullContext({}, "", ex);
  ASSERT_TRUE(l.ok());
  const auto p = model->FullContextDistribution(views);
  for (std::size_t y = 0; y < p.size(); ++y) {
    EXPECT_NEAR(std::exp((*l)[y]), p[y], 1e-9);
  }
}

class EvidenceExpertTest : public ::testing::Test {
 protected:
  SyntheticTask Task(double beta) {
    SyntheticTaskConfig cfg;
    cfg.beta = beta;
    return *SyntheticTask::Create(cfg);
  }
};

TEST_F(EvidenceExpertTest, NoOverlapReturnsZeroShotPrior) {
  SyntheticTask task = Task(6.0);
  EvidenceExpert e(task);
  const std::string query = "w1 w2 w3";
  std::vector<ContextExample> ex = {{"w50 w51", Token{2, std::nullopt}}};
  auto l = e.Query({}, query, ex);
  ASSERT_TRUE(l.ok());
  const auto prior = task.ZeroShotLogProbs(WordCounts(query));
  for (std::size_t y = 0; y < prior.size(); ++y) EXPECT_NEAR((*l)[y], prior[y], 1e-12);
}

TEST_F(EvidenceExpertTest, ExactMatchWithLargeBeta) {
  SyntheticTask task = Task(50.0);
  EvidenceExpert e(task);
  std::vector<ContextExample> ex = {{"w1 w2 w3", Token{3, std::nullopt}}};
  auto l = e.Query({}, "w1 w2 w3", ex);
  EXPECT_GT(std::exp((*l)[3]), 0.999);
}

TEST_F(EvidenceExpertTest, SymmetricInTwoLabels) {
  SyntheticTaskConfig cfg;
  cfg.zero_shot_strength = 0.0;
  auto task = *SyntheticTask::Create(cfg);
  EvidenceExpert e(task);
  std::vector<ContextExample> ex = {{"w1 w2", Token{0, std::nullopt}},
                                    {"w1 w3", Token{1, std::nullopt}}};
  auto l = e.FullContext({}, "w1 w9", ex);
  EXPECT_NEAR((*l)[0], (*l)[1], 1e-12);
}

TEST_F(EvidenceExpertTest, BetaIsMonotone) {
  std::vector<ContextExample> ex = {{"w1 w2 w7", Token{1, std::nullopt}}};
  double prev = 0.0;
  for (double beta : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    SyntheticTask task = Task(beta);
    EvidenceExpert e(task);
    const double mass = std::exp((*e.Query({}, "w1 w5", ex))[1]);
    EXPECT_GT(mass, prev);
    prev = mass;
  }
}

TEST_F(EvidenceExpertTest, ZeroShotIsQueryDependent) {
  SyntheticTask task = Task(6.0);
  // Words of class 0's topic block tilt the zero-shot prior toward class 0.
  std::string topical;
  for (int i = 0; i < 10; ++i) topical += "w" + std::to_string(i) + " ";
  const auto l = task.ZeroShotLogProbs(WordCounts(topical));
  EXPECT_EQ(ArgmaxLowestIndex(l), 0u);
  SyntheticTaskConfig flat;
  flat.zero_shot_strength = 0.0;
  auto t0 = *SyntheticTask::Create(flat);
  const auto u = t0.ZeroShotLogProbs(WordCounts(topical));
  for (double x : u) EXPECT_NEAR(x, std::log(0.25), 1e-12);
}

TEST_F(EvidenceExpertTest, SamplingIsDeterministicAndValidated) {
  SyntheticTask task = Task(6.0);
  RngStream a(1, 1), b(1, 1);
  const auto da = task.Sample(a), db = task.Sample(b);
  EXPECT_EQ(da.payload, db.payload);
  EXPECT_EQ(da.label, db.label);
  RngStream c(2, 2);
  EXPECT_EQ(task.SampleOfClass(3, c).true_class, 3u);
  SyntheticTaskConfig bad;
  bad.num_classes = 1;
  EXPECT_FALSE(SyntheticTask::Create(bad).ok());
  bad = {};
  bad.zero_shot_strength = -1;
  EXPECT_FALSE(SyntheticTask::Create(bad).ok());
}

TEST(CosineTest, Basics) {
  auto a = WordCounts("w1 w2");
  EXPECT_NEAR(CosineSimilarity(a, a), 1.0, 1e-15);
  EXPECT_EQ(CosineSimilarity(a, WordCounts("w3")), 0.0);
  EXPECT_EQ(WordCounts("w1 w1 x w2 wfoo").size(), 2u);
}

TEST(TableExpertTest, LooksUpPayloads) {
  std::map<std::string, std::vector<double>> table = {
      {"a", {std::log(0.6), std::log(0.4)}}, {"b", {std::log(0.7), std::log(0.3)}}};
  TableExpert e(Vocab(2), table);
  std::vector<ContextExample> a = {{"a", std::nullopt}};
  EXPECT_NEAR((*e.Query({}, "q", a))[0], std::log(0.6), 1e-15);
  std::vector<ContextExample> ab = {{"a", std::nullopt}, {"b", std::nullopt}};
  auto full = e.FullContext({}, "q", ab);
  EXPECT_NEAR(std::exp((*full)[0]), 0.42 / 0.54, 1e-12);
  EXPECT_NEAR((*e.FullContext({}, "q", {}))[0], std::log(0.5), 1e-15);
}

}  // namespace
}  // namespace poetry_dp
