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

#ifndef POETRY_DP_CORE_LOGPROB_H_
#define POETRY_DP_CORE_LOGPROB_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/core/types.h"

namespace poetry_dp {

// Raw values in (0, kPositiveLogProbTolerance] are provider round-off.
inline constexpr double kPositiveLogProbTolerance = 1e-9;

// Checks arity and finiteness and floors every value to min(raw_i, 0). If any
// raw value exceeded kPositiveLogProbTolerance the result is flagged via
// LogProbVector::exceeded_tolerance(); provider boundaries turn a flagged
// vector into a PositiveLogProb error (see RequireWithinTolerance).
// Errors: WrongArity, NonFinite (message carries the index).
absl::StatusOr<LogProbVector> ValidateLogProbs(std::span<const double> raw,
                                               std::size_t k);

// PositiveLogProb error if `v` was flagged during validation.
absl::Status RequireWithinTolerance(const LogProbVector& v);

// log(sum(exp(v))) with max subtraction. Returns -inf for an empty span.
double LogSumExp(std::span<const double> v);

// Softmax of finite log-weights via max subtraction; sums to 1 within 1e-12.
std::vector<double> LogNormalize(std::span<const double> v);

// Index of the largest value; ties resolve to the lowest index.
std::size_t ArgmaxLowestIndex(std::span<const double> v);

}  // namespace poetry_dp

#endif  // POETRY_DP_CORE_LOGPROB_H_
