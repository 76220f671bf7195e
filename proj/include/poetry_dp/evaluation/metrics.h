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

#ifndef POETRY_DP_EVALUATION_METRICS_H_
#define POETRY_DP_EVALUATION_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace poetry_dp {

// q_y. InvalidArgument when y is out of range.
absl::StatusOr<double> LMean(std::span<const double> q, std::size_t y);

// max_i |p_i - q_i|. ArityMismatch on unequal lengths.
absl::StatusOr<double> DInf(std::span<const double> p, std::span<const double> q);

// sum_i |p_i - q_i|. ArityMismatch on unequal lengths.
absl::StatusOr<double> L1Dist(std::span<const double> p, std::span<const double> q);

struct MeanStderr {
  double mean = 0.0;
  double standard_error = 0.0;  // sample standard deviation / sqrt(n)
};

// TooFew for fewer than two values.
absl::StatusOr<MeanStderr> ComputeMeanStderr(std::span<const double> values);

struct RocCurve {
  // (FPR, TPR) from (0, 0) to (1, 1), one point per distinct threshold.
  std::vector<std::pair<double, double>> points;
  double auroc = 0.5;
};

// AUROC as the pairwise win rate of members over non-members, ties 0.5.
// Empty when either list is empty.
absl::StatusOr<RocCurve> RocAuc(std::span<const double> member_scores,
                                std::span<const double> nonmember_scores);

// Least-squares slope of ln(y) against ln(x). Needs two or more points with
// positive y and at least two distinct x; std::nullopt otherwise.
std::optional<double> LogLogSlope(std::span<const double> x,
                                  std::span<const double> y);

double Median(std::vector<double> values);

}  // namespace poetry_dp

#endif  // POETRY_DP_EVALUATION_METRICS_H_
