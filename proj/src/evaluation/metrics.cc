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

#include "poetry_dp/evaluation/metrics.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"

namespace poetry_dp {
namespace {

absl::Status SameLength(std::span<const double> p, std::span<const double> q) {
  if (p.size() == q.size()) return absl::OkStatus();
  return MakeError(ErrorKind::kArityMismatch,
                   absl::StrCat("lengths ", p.size(), " and ", q.size()));
}

}  // namespace

absl::StatusOr<double> LMean(std::span<const double> q, std::size_t y) {
  if (y >= q.size()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("label ", y, " outside ", q.size(), " classes"));
  }
  return q[y];
}

absl::StatusOr<double> DInf(std::span<const double> p, std::span<const double> q) {
  if (auto s = SameLength(p, q); !s.ok()) return s;
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - q[i]));
  return d;
}

absl::StatusOr<double> L1Dist(std::span<const double> p, std::span<const double> q) {
  if (auto s = SameLength(p, q); !s.ok()) return s;
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return d;
}

absl::StatusOr<MeanStderr> ComputeMeanStderr(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    return MakeError(ErrorKind::kTooFew,
                     absl::StrCat("need at least 2 values, got ", n));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return MeanStderr{mean, sd / std::sqrt(static_cast<double>(n))};
}

absl::StatusOr<RocCurve> RocAuc(std::span<const double> member_scores,
                                std::span<const double> nonmember_scores) {
  if (member_scores.empty() || nonmember_scores.empty()) {
    return MakeError(ErrorKind::kEmpty, "both score lists must be non-empty");
  }
  // Sweep thresholds from high to low; a score >= threshold is called member.
  struct Scored {
    double score;
    bool member;
  };
  std::vector<Scored> all;
  all.reserve(member_scores.size() + nonmember_scores.size());
  for (double s : member_scores) all.push_back({s, true});
  for (double s : nonmember_scores) all.push_back({s, false});
  std::sort(all.begin(), all.end(),
            [](const Scored& a, const Scored& b) { return a.score > b.score; });

  const double np = static_cast<double>(member_scores.size());
  const double nn = static_cast<double>(nonmember_scores.size());
  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  double tp = 0.0, fp = 0.0, area = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    double dtp = 0.0, dfp = 0.0;
    const double s = all[i].score;
    for (; i < all.size() && all[i].score == s; ++i) {
      (all[i].member ? dtp : dfp) += 1.0;
    }
    // Trapezoid over a tied block counts member/non-member ties as 1/2.
    area += dfp * (tp + 0.5 * dtp);
    tp += dtp;
    fp += dfp;
    curve.points.emplace_back(fp / nn, tp / np);
  }
  curve.auroc = area / (np * nn);
  return curve;
}

std::optional<double> LogLogSlope(std::span<const double> x,
                                  std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 2 || n != x.size()) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace poetry_dp
