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

#include "poetry_dp/mechanisms/clip.h"

#include <algorithm>
#include <cmath>

namespace poetry_dp {

const char* ClipModeName(ClipMode mode) {
  return mode == ClipMode::kClamp ? "clamp" : "zero_out";
}

std::optional<ClipMode> ParseClipMode(const std::string& name) {
  if (name == "clamp") return ClipMode::kClamp;
  if (name == "zero_out") return ClipMode::kZeroOut;
  return std::nullopt;
}

LogProbVector ClipLogProbs(const LogProbVector& l, double gamma, ClipMode mode) {
  std::vector<double> out(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double v = l[i];
    if (mode == ClipMode::kClamp) {
      out[i] = std::min(0.0, std::max(-gamma, v));
    } else {
      out[i] = (v >= -gamma && v <= 0.0) ? v : 0.0;
    }
  }
  return LogProbVector::FromTrusted(std::move(out));
}

std::vector<double> ClampProbabilities(std::span<const double> p, double gamma) {
  const double floor = std::exp(-gamma);
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::max(p[i], floor);
  return out;
}

double L2Norm(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return std::sqrt(sum);
}

std::vector<double> VClip(std::span<const double> x, double gamma) {
  const double norm = L2Norm(x);
  const double scale = norm > gamma ? gamma / norm : 1.0;
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace poetry_dp
