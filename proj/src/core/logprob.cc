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

#include "poetry_dp/core/logprob.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"

namespace poetry_dp {

absl::StatusOr<LogProbVector> ValidateLogProbs(std::span<const double> raw,
                                               std::size_t k) {
  if (raw.size() != k) {
    return MakeError(ErrorKind::kWrongArity,
                     absl::StrCat("expected ", k, " log-probs, got ", raw.size()));
  }
  std::vector<double> values(raw.size());
  bool exceeded = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      return MakeError(ErrorKind::kNonFinite,
                       absl::StrCat("log-prob at index ", i, " is ", raw[i]));
    }
    if (raw[i] > kPositiveLogProbTolerance) exceeded = true;
    values[i] = std::min(raw[i], 0.0);
  }
  return LogProbVector::FromTrusted(std::move(values), exceeded);
}

absl::Status RequireWithinTolerance(const LogProbVector& v) {
  if (v.exceeded_tolerance()) {
    return MakeError(ErrorKind::kPositiveLogProb,
                     "log-prob above the 1e-9 round-off tolerance");
  }
  return absl::OkStatus();
}

double LogSumExp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - m);
  return m + std::log(sum);
}

std::vector<double> LogNormalize(std::span<const double> v) {
  std::vector<double> out(v.size());
  if (v.empty()) return out;
  const double m = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

std::size_t ArgmaxLowestIndex(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace poetry_dp
