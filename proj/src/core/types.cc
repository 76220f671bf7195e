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

#include "poetry_dp/core/types.h"

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"

namespace poetry_dp {

absl::StatusOr<Vocabulary> Vocabulary::Create(
    std::vector<std::string> surfaces,
    std::optional<std::string> end_of_sequence) {
  if (surfaces.size() < 2) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "vocabulary needs at least two candidates");
  }
  std::set<std::string> seen;
  for (const auto& s : surfaces) {
    if (s.empty()) {
      return MakeError(ErrorKind::kInvalidArgument, "empty token surface");
    }
    if (!seen.insert(s).second) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("duplicate token surface '", s, "'"));
    }
  }
  Vocabulary vocab;
  vocab.surfaces_ = std::move(surfaces);
  if (end_of_sequence.has_value()) {
    vocab.eos_ = vocab.IndexOf(*end_of_sequence);
    if (!vocab.eos_.has_value()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("end-of-sequence token '", *end_of_sequence,
                                    "' is not in the vocabulary"));
    }
  }
  return vocab;
}

std::optional<std::size_t> Vocabulary::IndexOf(
    const std::string& surface) const {
  for (std::size_t i = 0; i < surfaces_.size(); ++i) {
    if (surfaces_[i] == surface) return i;
  }
  return std::nullopt;
}

absl::StatusOr<Token> Vocabulary::MakeToken(std::size_t id) const {
  if (id >= surfaces_.size()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("token id ", id, " out of range for size ",
                                  surfaces_.size()));
  }
  return Token{id, surfaces_[id]};
}

absl::StatusOr<ExpertSet> ExpertSet::Create(std::vector<ContextExample> examples,
                                            std::size_t group_size) {
  if (examples.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "expert set is empty");
  }
  if (group_size == 0) {
    return MakeError(ErrorKind::kInvalidArgument, "group size must be >= 1");
  }
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].payload.empty()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("context example ", i, " has no payload"));
    }
  }
  ExpertSet set;
  set.examples_ = std::move(examples);
  set.group_size_ = group_size;
  return set;
}

const char* CompositionModeName(CompositionMode mode) {
  return mode == CompositionMode::kNaive ? "naive" : "advanced";
}

std::optional<CompositionMode> ParseCompositionMode(const std::string& name) {
  if (name == "naive") return CompositionMode::kNaive;
  if (name == "advanced") return CompositionMode::kAdvanced;
  return std::nullopt;
}

absl::Status ValidateBudget(const PrivacyBudget& budget) {
  if (!(budget.epsilon > 0) || !std::isfinite(budget.epsilon)) {
    return MakeError(ErrorKind::kInfeasible, "epsilon must be positive");
  }
  if (!(budget.delta >= 0 && budget.delta < 1)) {
    return MakeError(ErrorKind::kInvalidArgument, "delta must lie in [0, 1)");
  }
  if (budget.composition == CompositionMode::kAdvanced && budget.delta <= 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "advanced composition requires delta > 0");
  }
  if (budget.max_tokens < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "max_tokens must be >= 1");
  }
  if (!(budget.gamma > 0) || !std::isfinite(budget.gamma)) {
    return MakeError(ErrorKind::kInvalidArgument, "gamma must be positive");
  }
  if (budget.sigma.has_value() && !(*budget.sigma > 0)) {
    return MakeError(ErrorKind::kInvalidArgument, "sigma must be positive");
  }
  return absl::OkStatus();
}

}  // namespace poetry_dp
