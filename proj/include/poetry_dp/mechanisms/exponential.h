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

#ifndef POETRY_DP_MECHANISMS_EXPONENTIAL_H_
#define POETRY_DP_MECHANISMS_EXPONENTIAL_H_

#include <cstddef>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/core/rng.h"
#include "poetry_dp/mechanisms/aggregate.h"

namespace poetry_dp {

// Log-weights u_i * sigma / (2 * sensitivity) of the exponential mechanism.
std::vector<double> ExponentialMechanismLogits(const UtilityVector& u,
                                               double sigma);

// Closed-form output distribution Pr[i] proportional to
// exp(u_i * sigma / (2 * sensitivity)). Used by tests and exact audits.
std::vector<double> ExponentialMechanismProbabilities(const UtilityVector& u,
                                                      double sigma);

// Draws from the distribution above with the Gumbel-max trick, which never
// forms the (possibly underflowing) normalized weights.
std::size_t SampleExponential(const UtilityVector& u, double sigma,
                              RngStream& rng);

// Report-noisy-max release over a vote histogram, realized as the
// exponential mechanism with sensitivity 1: Pr[y] proportional to
// exp(count_y * sigma / 2). Errors: InvalidArgument unless `votes` is a
// kVotes histogram.
absl::StatusOr<std::size_t> NoisyArgmaxVotes(const UtilityVector& votes,
                                             double sigma, RngStream& rng);

}  // namespace poetry_dp

#endif  // POETRY_DP_MECHANISMS_EXPONENTIAL_H_
