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

#ifndef POETRY_DP_ACCOUNTING_ACCOUNTING_H_
#define POETRY_DP_ACCOUNTING_ACCOUNTING_H_

#include <optional>

#include "absl/status/statusor.h"
#include "poetry_dp/core/types.h"

namespace poetry_dp {

// The advanced-composition bound used to calibrate per-token noise, written
// out term for term. `log` is the natural logarithm.
inline constexpr char kAdvancedCompositionBound[] =
    "eps <= T*sigma*(e^sigma - 1) + sigma*sqrt(2*T*log(1/delta))";

// Total epsilon of T sigma-DP releases under basic composition: T * sigma.
double NaiveEpsilon(double sigma, int tokens);

// Total epsilon of T sigma-DP releases under advanced composition:
//   T*sigma*(e^sigma - 1) + sigma*sqrt(2*T*ln(1/delta)).
double AdvancedEpsilon(double sigma, int tokens, double delta);

struct CalibrationResult {
  double sigma = 0.0;
  double achieved_epsilon = 0.0;
  int iterations = 0;
  // epsilon - achieved_epsilon. In [0, kCalibrationTolerance) for advanced
  // composition; naive composition is exact up to one rounding of T*(eps/T).
  double residual = 0.0;
};

inline constexpr double kCalibrationTolerance = 1e-9;

// Per-token sigma for a total (epsilon, delta) over `tokens` releases.
//   naive:    sigma = epsilon / tokens exactly.
//   advanced: the largest sigma with AdvancedEpsilon(sigma) <= epsilon,
//             found by bisection until epsilon - achieved < 1e-9.
// Errors: Infeasible if epsilon <= 0; InvalidArgument for tokens < 1 or a
// delta outside (0, 1) under advanced composition.
absl::StatusOr<CalibrationResult> CalibrateSigma(double epsilon, double delta,
                                                 int tokens,
                                                 CompositionMode mode);

// Advanced composition when delta > 0 and more than one token is released,
// naive otherwise.
CompositionMode DefaultComposition(double delta, int tokens);

// Builds a budget with sigma calibrated for `max_tokens` releases.
absl::StatusOr<PrivacyBudget> MakeBudget(
    double epsilon, double delta, int max_tokens, double gamma,
    std::optional<CompositionMode> mode = std::nullopt);

// Privacy amplification by Poisson subsampling with rate q:
// ln(1 + q * (e^eps0 - 1)).
double AmplifiedEpsilon(double epsilon0, double q);

// Inverse of AmplifiedEpsilon in its first argument.
double DeamplifiedEpsilon(double amplified, double q);

// Per-round budget for the subsampling baseline: `rounds` releases, each on a
// Poisson(q) subset. The amplified per-round budget is the larger of the
// naive (epsilon / rounds) and, when delta > 0, the advanced-composition
// calibration; both keep the m-fold composition within (epsilon, delta).
// This replaces an exact PRV accountant and is conservative relative to it.
struct SubsamplingBudget {
  double per_round_epsilon = 0.0;  // eps0, spent on the sampled subset
  double amplified_epsilon = 0.0;  // AmplifiedEpsilon(eps0, q)
  CompositionMode composition = CompositionMode::kNaive;
  double composed_epsilon = 0.0;   // total over all rounds
};

absl::StatusOr<SubsamplingBudget> CalibrateSubsampling(double epsilon,
                                                       double delta, int rounds,
                                                       double q);

}  // namespace poetry_dp

#endif  // POETRY_DP_ACCOUNTING_ACCOUNTING_H_
