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

#ifndef POETRY_DP_MECHANISMS_CLIP_H_
#define POETRY_DP_MECHANISMS_CLIP_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poetry_dp/core/types.h"

namespace poetry_dp {

// How values outside [-gamma, 0] are brought into range.
//   kClamp:   l -> min(0, max(-gamma, l)). Default.
//   kZeroOut: out-of-range values are replaced by 0, as in the original
//             definition of the clip operator. Kept for compatibility.
// Either mode bounds each coordinate to [-gamma, 0], which is all the
// exponential-mechanism sensitivity argument needs.
enum class ClipMode { kClamp, kZeroOut };

const char* ClipModeName(ClipMode mode);
std::optional<ClipMode> ParseClipMode(const std::string& name);

LogProbVector ClipLogProbs(const LogProbVector& l, double gamma,
                           ClipMode mode = ClipMode::kClamp);

// Probability-space view of kClamp: p -> max(p, exp(-gamma)) per coordinate,
// without renormalization.
std::vector<double> ClampProbabilities(std::span<const double> p, double gamma);

// Scales x onto the l2 ball of radius gamma: x * min(1, gamma / ||x||_2).
std::vector<double> VClip(std::span<const double> x, double gamma);

double L2Norm(std::span<const double> x);

}  // namespace poetry_dp

#endif  // POETRY_DP_MECHANISMS_CLIP_H_
