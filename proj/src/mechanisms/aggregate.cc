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

#include "poetry_dp/mechanisms/aggregate.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"

namespace poetry_dp {
namespace {

absl::Status CheckArity(std::span<const LogProbVector> vectors) {
  if (vectors.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "no expert vectors");
  }
  const std::size_t k = vectors.front().size();
  for (std::size_t j = 1; j < vectors.size(); ++j) {
    if (vectors[j].size() != k) {
      return MakeError(ErrorKind::kArityMismatch,
                       absl::StrCat("expert ", j, " has ", vectors[j].size(),
                                    " entries, expected ", k));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<UtilityVector> AggregatePoe(std::span<const LogProbVector> clipped,
                                           double gamma) {
  if (auto s = CheckArity(clipped); !s.ok()) return s;
  UtilityVector u;
  u.kind = UtilityKind::kPoe;
  u.sensitivity = gamma;
  u.values.assign(clipped.front().size(), 0.0);
  // Index order is fixed so the floating-point sum is reproducible.
  for (std::size_t j = 0; j < clipped.size(); ++j) {
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      const double v = clipped[j][i];
      if (v < -gamma || v > 0.0) {
        return MakeError(ErrorKind::kInvalidArgument,
                         absl::StrCat("expert ", j, " coordinate ", i, " = ", v,
                                      " lies outside [-gamma, 0]"));
      }
      u.values[i] += v;
    }
  }
  return u;
}

absl::StatusOr<UtilityVector> AggregateVotes(std::span<const LogProbVector> raw) {
  if (auto s = CheckArity(raw); !s.ok()) return s;
  UtilityVector u;
  u.kind = UtilityKind::kVotes;
  u.sensitivity = 1.0;
  u.values.assign(raw.front().size(), 0.0);
  for (const auto& l : raw) u.values[ArgmaxLowestIndex(l.values())] += 1.0;
  return u;
}

std::vector<std::vector<std::size_t>> PartitionGroups(std::size_t num_examples,
                                                      std::size_t group_size) {
  std::vector<std::vector<std::size_t>> groups;
  if (group_size == 0) return groups;
  for (std::size_t start = 0; start < num_examples; start += group_size) {
    std::vector<std::size_t> group;
    for (std::size_t i = start; i < std::min(num_examples, start + group_size);
         ++i) {
      group.push_back(i);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<std::vector<std::size_t>> PartitionGroups(const ExpertSet& set) {
  return PartitionGroups(set.size(), set.group_size());
}

}  // namespace poetry_dp
