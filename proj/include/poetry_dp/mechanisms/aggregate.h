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

#ifndef POETRY_DP_MECHANISMS_AGGREGATE_H_
#define POETRY_DP_MECHANISMS_AGGREGATE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/core/types.h"

namespace poetry_dp {

enum class UtilityKind {
  kPoe,    // summed clipped log-probs, each term in [-gamma, 0]
  kVotes,  // histogram of per-expert argmax votes
  kLogProbs,  // one full-context log-prob vector (non-private baseline)
};

// Per-candidate utilities plus the sensitivity used to scale the
// exponential mechanism: gamma for PoE sums, 1 for vote histograms.
struct UtilityVector {
  std::vector<double> values;
  double sensitivity = 1.0;
  UtilityKind kind = UtilityKind::kPoe;
};

// Coordinate-wise sum of clipped per-expert log-probs (a product of experts
// in log space). Every coordinate must already lie in [-gamma, 0].
// Errors: ArityMismatch, InvalidArgument (empty input or out-of-range value).
absl::StatusOr<UtilityVector> AggregatePoe(std::span<const LogProbVector> clipped,
                                           double gamma);

// Sum of one-hot argmax vectors, ties toward the lowest index.
// Errors: ArityMismatch, InvalidArgument (empty input).
absl::StatusOr<UtilityVector> AggregateVotes(std::span<const LogProbVector> raw);

// Contiguous partition of [0, J) into ceil(J / g) index groups.
std::vector<std::vector<std::size_t>> PartitionGroups(std::size_t num_examples,
                                                      std::size_t group_size);
std::vector<std::vector<std::size_t>> PartitionGroups(const ExpertSet& set);

}  // namespace poetry_dp

#endif  // POETRY_DP_MECHANISMS_AGGREGATE_H_
