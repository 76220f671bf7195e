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

#include "poetry_dp/experts/powerlaw_expert.h"

#include <cmath>
#include <numeric>

#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"
#include "poetry_dp/core/rng.h"

namespace poetry_dp {

std::vector<double> ZipfProbabilities(std::size_t k, double exponent) {
  std::vector<double> p(k);
  double total = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    p[r] = std::pow(static_cast<double>(r + 1), -exponent);
    total += p[r];
  }
  for (double& x : p) x /= total;
  return p;
}

absl::StatusOr<std::unique_ptr<PowerLawExpert>> PowerLawExpert::Create(
    Vocabulary vocabulary, PowerLawConfig config) {
  if (!(config.exponent > 0)) {
    return MakeError(ErrorKind::kInvalidArgument, "exponent must be positive");
  }
  if (config.exponent_jitter < 0) {
    return MakeError(ErrorKind::kInvalidArgument, "jitter must be >= 0");
  }
  return std::unique_ptr<PowerLawExpert>(
      new PowerLawExpert(std::move(vocabulary), config));
}

std::vector<double> PowerLawExpert::Probabilities(uint64_t call_digest) const {
  const std::size_t k = vocabulary_.size();
  RngStream rng(config_.seed, call_digest);
  double exponent = config_.exponent;
  if (config_.exponent_jitter > 0) {
    exponent *= std::exp(config_.exponent_jitter * rng.Normal());
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = k - 1; i > 0; --i) {
    std::swap(order[i], order[rng.UniformInt(i + 1)]);
  }
  const std::vector<double> ranked = ZipfProbabilities(k, exponent);
  std::vector<double> p(k);
  for (std::size_t r = 0; r < k; ++r) p[order[r]] = ranked[r];
  return p;
}

absl::StatusOr<std::vector<double>> PowerLawExpert::DoQuery(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> group) {
  std::vector<double> p = Probabilities(DigestCall(prefix, query, group));
  for (double& x : p) x = std::log(x);
  return p;
}

absl::StatusOr<std::vector<double>> PowerLawExpert::DoFullContext(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> examples) {
  if (examples.empty()) return DoQuery(prefix, query, examples);
  std::vector<double> logits(vocabulary_.size(), 0.0);
  for (std::size_t j = 0; j < examples.size(); ++j) {
    auto l = DoQuery(prefix, query, examples.subspan(j, 1));
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] += (*l)[i];
  }
  const double z = LogSumExp(logits);
  for (double& x : logits) x -= z;
  return logits;
}

}  // namespace poetry_dp
