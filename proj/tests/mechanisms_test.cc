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
#include <numeric>

#include "gtest/gtest.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/rng.h"
#include "poetry_dp/mechanisms/aggregate.h"
#include "poetry_dp/mechanisms/clip.h"
#include "poetry_dp/mechanisms/exponential.h"

namespace poetry_dp {
namespace {

LogProbVector Logs(std::vector<double> p) {
  for (double& x : p) x = std::log(x);
  return LogProbVector::FromTrusted(std::move(p));
}

TEST(ClipTest, ClampExample) {
  auto c = ClipLogProbs(LogProbVector::FromTrusted({-1.5, -3.0, -0.2}), 2.0);
  EXPECT_EQ(c.values(), (std::vector<double>{-1.5, -2.0, -0.2}));
}

TEST(ClipTest, ZeroOutExample) {
  auto c = ClipLogProbs(LogProbVector::FromTrusted({-1.5, -3.0, -0.2}), 2.0,
                        ClipMode::kZeroOut);
  EXPECT_EQ(c.values(), (std::vector<double>{-1.5, 0.0, -0.2}));
}

TEST(ClipTest, ProbabilityView) {
  auto q = ClampProbabilities(std::vector<double>{0.9, 0.05, 0.05}, 2.0);
  EXPECT_DOUBLE_EQ(q[0], 0.9);
  EXPECT_NEAR(q[1], 0.1353, 5e-5);
  EXPECT_DOUBLE_EQ(q[1], std::exp(-2.0));
}

TEST(ClipTest, DefaultIsClamp) {
  auto c = ClipLogProbs(LogProbVector::FromTrusted({-5.0, 0.0}), 1.0);
  EXPECT_EQ(c.values(), (std::vector<double>{-1.0, 0.0}));
  EXPECT_EQ(ParseClipMode("zero_out"), ClipMode::kZeroOut);
  EXPECT_STREQ(ClipModeName(ClipMode::kClamp), "clamp");
}

TEST(VClipTest, Examples) {
  auto a = VClip(std::vector<double>{3, 4}, 2.0);
  EXPECT_NEAR(a[0], 1.2, 1e-15);
  EXPECT_NEAR(a[1], 1.6, 1e-15);
  EXPECT_NEAR(L2Norm(a), 2.0, 1e-15);
  EXPECT_EQ(VClip(std::vector<double>{1, 0}, 2.0), (std::vector<double>{1, 0}));
  EXPECT_EQ(VClip(std::vector<double>{0, 0}, 2.0), (std::vector<double>{0, 0}));
}

TEST(AggregatePoeTest, SectionExample) {
  std::vector<LogProbVector> experts = {Logs({0.6, 0.4}), Logs({0.7, 0.3})};
  auto u = AggregatePoe(experts, 2.0);
  ASSERT_TRUE(u.ok());
  EXPECT_NEAR(u->values[0], std::log(0.42), 1e-12);
  EXPECT_NEAR(u->values[1], std::log(0.12), 1e-12);
  EXPECT_EQ(u->kind, UtilityKind::kPoe);
  EXPECT_DOUBLE_EQ(u->sensitivity, 2.0);
}

TEST(AggregatePoeTest, SingleAndUniform) {
  std::vector<LogProbVector> one = {LogProbVector::FromTrusted({-0.1, -1.9})};
  EXPECT_EQ(AggregatePoe(one, 2.0)->values, one[0].values());
  std::vector<LogProbVector> flat(5, Logs({0.25, 0.25, 0.25, 0.25}));
  auto u = AggregatePoe(flat, 2.0);
  for (double v : u->values) EXPECT_DOUBLE_EQ(v, u->values[0]);
}

TEST(AggregatePoeTest, Errors) {
  std::vector<LogProbVector> none;
  EXPECT_TRUE(HasErrorKind(AggregatePoe(none, 2.0).status(),
                           ErrorKind::kInvalidArgument));
  std::vector<LogProbVector> ragged = {LogProbVector::FromTrusted({-1, -1}),
                                       LogProbVector::FromTrusted({-1})};
  EXPECT_TRUE(HasErrorKind(AggregatePoe(ragged, 2.0).status(),
                           ErrorKind::kArityMismatch));
  std::vector<LogProbVector> unclipped = {LogProbVector::FromTrusted({-3, 0})};
  EXPECT_TRUE(HasErrorKind(AggregatePoe(unclipped, 2.0).status(),
                           ErrorKind::kInvalidArgument));
}

TEST(AggregateVotesTest, Examples) {
  std::vector<LogProbVector> experts = {Logs({0.6, 0.4}), Logs({0.7, 0.3})};
  auto v = AggregateVotes(experts);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v->values, (std::vector<double>{2, 0}));
  EXPECT_EQ(v->kind, UtilityKind::kVotes);
  EXPECT_DOUBLE_EQ(v->sensitivity, 1.0);

  std::vector<LogProbVector> one = {Logs({0.1, 0.1, 0.1, 0.6, 0.1})};
  EXPECT_EQ(AggregateVotes(one)->values, (std::vector<double>{0, 0, 0, 1, 0}));
  std::vector<LogProbVector> tie = {Logs({0.5, 0.5})};
  EXPECT_EQ(AggregateVotes(tie)->values, (std::vector<double>{1, 0}));
  EXPECT_EQ(AggregateVotes(tie)->values, AggregateVotes(tie)->values);
}

TEST(PartitionGroupsTest, Examples) {
  using G = std::vector<std::vector<std::size_t>>;
  EXPECT_EQ(PartitionGroups(6, 3), (G{{0, 1, 2}, {3, 4, 5}}));
  EXPECT_EQ(PartitionGroups(5, 2), (G{{0, 1}, {2, 3}, {4}}));
  EXPECT_EQ(PartitionGroups(3, 1), (G{{0}, {1}, {2}}));
}

TEST(ExponentialTest, ClosedFormExample) {
  UtilityVector u{{-1.0, -2.0}, 2.0, UtilityKind::kPoe};
  auto p = ExponentialMechanismProbabilities(u, 1.0);
  const double oracle =
      std::exp(-0.25) / (std::exp(-0.25) + std::exp(-0.5));
  EXPECT_NEAR(p[0], oracle, 1e-15);
  EXPECT_NEAR(p[0], 0.5622, 5e-5);
  auto l = ExponentialMechanismLogits(u, 1.0);
  EXPECT_DOUBLE_EQ(l[0], -0.25);
  EXPECT_DOUBLE_EQ(l[1], -0.5);
}

TEST(ExponentialTest, EmpiricalFrequencyMatches) {
  UtilityVector u{{-1.0, -2.0}, 2.0, UtilityKind::kPoe};
  RngStream rng(42, 0);
  const int n = 1000000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += SampleExponential(u, 1.0, rng) == 0;
  EXPECT_NEAR(static_cast<double>(zeros) / n, 0.5622, 0.002);
}

TEST(ExponentialTest, TinySigmaIsUniform) {
  UtilityVector u{{0.0, -2.0, -1.0}, 2.0, UtilityKind::kPoe};
  for (double x : ExponentialMechanismProbabilities(u, 1e-9)) {
    EXPECT_NEAR(x, 1.0 / 3, 1e-8);
  }
}

TEST(ExponentialTest, EqualUtilitiesUniform) {
  UtilityVector u{{-1.0, -1.0, -1.0, -1.0}, 2.0, UtilityKind::kPoe};
  for (double x : ExponentialMechanismProbabilities(u, 3.0)) {
    EXPECT_DOUBLE_EQ(x, 0.25);
  }
}

TEST(ExponentialTest, HugeUtilitiesDoNotUnderflow) {
  UtilityVector u{{-20000.0, -20001.0}, 2.0, UtilityKind::kPoe};
  auto p = ExponentialMechanismProbabilities(u, 2.0);
  EXPECT_NEAR(p[0], 1.0 / (1.0 + std::exp(-0.5)), 1e-12);
}

TEST(NoisyArgmaxTest, ClosedForm) {
  UtilityVector v{{2.0, 0.0}, 1.0, UtilityKind::kVotes};
  auto p = ExponentialMechanismProbabilities(v, 1.0);
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(p[0], 0.7311, 5e-5);
  RngStream rng(1, 1);
  int zeros = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) zeros += *NoisyArgmaxVotes(v, 1.0, rng) == 0;
  EXPECT_NEAR(static_cast<double>(zeros) / n, 0.7311, 0.004);
}

TEST(NoisyArgmaxTest, LargeSigmaPicksLeader) {
  UtilityVector v{{4.0, 0.0, 0.0, 0.0}, 1.0, UtilityKind::kVotes};
  EXPECT_GT(ExponentialMechanismProbabilities(v, 50.0)[0], 1 - 1e-6);
  RngStream rng(2, 2);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(*NoisyArgmaxVotes(v, 50.0, rng), 0u);
}

TEST(NoisyArgmaxTest, EqualVotesUniform) {
  UtilityVector v{{3, 3, 3}, 1.0, UtilityKind::kVotes};
  for (double x : ExponentialMechanismProbabilities(v, 1.0)) {
    EXPECT_DOUBLE_EQ(x, 1.0 / 3);
  }
}

TEST(NoisyArgmaxTest, RejectsPoeUtilities) {
  UtilityVector u{{-1, -2}, 2.0, UtilityKind::kPoe};
  RngStream rng(0, 0);
  EXPECT_TRUE(HasErrorKind(NoisyArgmaxVotes(u, 1.0, rng).status(),
                           ErrorKind::kInvalidArgument));
}

}  // namespace
}  // namespace poetry_dp
