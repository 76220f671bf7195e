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

#include "poetry_dp/mechanisms/exponential.h"

#include <limits>

#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"

namespace poetry_dp {

std::vector<double> ExponentialMechanismLogits(const UtilityVector& u,
                                               double sigma) {
  const double scale = sigma / (2.0 * u.sensitivity);
  std::vector<double> logits(u.values.size());
  for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = u.values[i] * scale;
  return logits;
}

std::vector<double> ExponentialMechanismProbabilities(const UtilityVector& u,
                                                      double sigma) {
  return LogNormalize(ExponentialMechanismLogits(u, sigma));
}

std::size_t SampleExponential(const UtilityVector& u, double sigma,
                              RngStream& rng) {
  const std::vector<double> logits = ExponentialMechanismLogits(u, sigma);
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double score = logits[i] + rng.Gumbel();
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

absl::StatusOr<std::size_t> NoisyArgmaxVotes(const UtilityVector& votes,
                                             double sigma, RngStream& rng) {
  if (votes.kind != UtilityKind::kVotes || votes.sensitivity != 1.0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "noisy argmax expects a vote histogram with sensitivity 1");
  }
  return SampleExponential(votes, sigma, rng);
}

}  // namespace poetry_dp
