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

#include "poetry_dp/accounting/accounting.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"

namespace poetry_dp {

double NaiveEpsilon(double sigma, int tokens) { return tokens * sigma; }

double AdvancedEpsilon(double sigma, int tokens, double delta) {
  const double t = static_cast<double>(tokens);
  return t * sigma * std::expm1(sigma) +
         sigma * std::sqrt(2.0 * t * std::log(1.0 / delta));
}

absl::StatusOr<CalibrationResult> CalibrateSigma(double epsilon, double delta,
                                                 int tokens,
                                                 CompositionMode mode) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return MakeError(ErrorKind::kInfeasible,
                     absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  if (tokens < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "tokens must be >= 1");
  }
  CalibrationResult result;
  if (mode == CompositionMode::kNaive) {
    result.sigma = epsilon / tokens;
    result.achieved_epsilon = NaiveEpsilon(result.sigma, tokens);
    result.residual = epsilon - result.achieved_epsilon;
    return result;
  }
  if (!(delta > 0 && delta < 1)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "advanced composition requires delta in (0, 1)");
  }
  auto eps_of = [&](double s) { return AdvancedEpsilon(s, tokens, delta); };
  double lo = 0.0;
  double hi = epsilon;
  // For delta > e^-0.5 and one token the bound can sit below epsilon at
  // sigma = epsilon; widen until the bracket is valid.
  while (eps_of(hi) <= epsilon) {
    lo = hi;
    hi *= 2.0;
  }
  int iterations = 0;
  while (epsilon - eps_of(lo) >= kCalibrationTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++iterations;
    if (eps_of(mid) <= epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.sigma = lo;
  result.achieved_epsilon = eps_of(lo);
  result.iterations = iterations;
  result.residual = epsilon - result.achieved_epsilon;
  if (!(lo > 0)) {
    return MakeError(ErrorKind::kInfeasible,
                     "no positive sigma satisfies the composition bound");
  }
  return result;
}

CompositionMode DefaultComposition(double delta, int tokens) {
  return (delta > 0 && tokens > 1) ? CompositionMode::kAdvanced
                                   : CompositionMode::kNaive;
}

absl::StatusOr<PrivacyBudget> MakeBudget(double epsilon, double delta,
                                         int max_tokens, double gamma,
                                         std::optional<CompositionMode> mode) {
  PrivacyBudget budget;
  budget.epsilon = epsilon;
  budget.delta = delta;
  budget.max_tokens = max_tokens;
  budget.gamma = gamma;
  budget.composition = mode.value_or(DefaultComposition(delta, max_tokens));
  if (auto s = ValidateBudget(budget); !s.ok()) return s;
  auto calibrated = CalibrateSigma(epsilon, delta, max_tokens, budget.composition);
  if (!calibrated.ok()) return calibrated.status();
  budget.sigma = calibrated->sigma;
  return budget;
}

double AmplifiedEpsilon(double epsilon0, double q) {
  return std::log1p(q * std::expm1(epsilon0));
}

double DeamplifiedEpsilon(double amplified, double q) {
  return std::log1p(std::expm1(amplified) / q);
}

absl::StatusOr<SubsamplingBudget> CalibrateSubsampling(double epsilon,
                                                       double delta, int rounds,
                                                       double q) {
  if (!(q > 0 && q <= 1)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "inclusion probability must lie in (0, 1]");
  }
  auto naive = CalibrateSigma(epsilon, delta, rounds, CompositionMode::kNaive);
  if (!naive.ok()) return naive.status();
  SubsamplingBudget out;
  out.amplified_epsilon = naive->sigma;
  out.composition = CompositionMode::kNaive;
  out.composed_epsilon = NaiveEpsilon(naive->sigma, rounds);
  if (delta > 0 && delta < 1) {
    auto advanced =
        CalibrateSigma(epsilon, delta, rounds, CompositionMode::kAdvanced);
    if (!advanced.ok()) return advanced.status();
    if (advanced->sigma > out.amplified_epsilon) {
      out.amplified_epsilon = advanced->sigma;
      out.composition = CompositionMode::kAdvanced;
      out.composed_epsilon = advanced->achieved_epsilon;
    }
  }
  out.per_round_epsilon = DeamplifiedEpsilon(out.amplified_epsilon, q);
  return out;
}

}  // namespace poetry_dp
