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

#ifndef POETRY_DP_CORE_TYPES_H_
#define POETRY_DP_CORE_TYPES_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace poetry_dp {

// An index into a Vocabulary. The surface string is informational only;
// every vector in the library is aligned to the vocabulary index order.
struct Token {
  std::size_t id = 0;
  std::optional<std::string> surface;

  friend bool operator==(const Token& a, const Token& b) { return a.id == b.id; }
};

class Vocabulary {
 public:
  // Requires at least two distinct, non-empty surfaces. If `end_of_sequence`
  // is set it must be one of the surfaces.
  static absl::StatusOr<Vocabulary> Create(
      std::vector<std::string> surfaces,
      std::optional<std::string> end_of_sequence = std::nullopt);

  std::size_t size() const { return surfaces_.size(); }
  const std::vector<std::string>& surfaces() const { return surfaces_; }
  const std::string& surface(std::size_t id) const { return surfaces_[id]; }
  std::optional<std::size_t> IndexOf(const std::string& surface) const;
  std::optional<std::size_t> end_of_sequence() const { return eos_; }

  absl::StatusOr<Token> MakeToken(std::size_t id) const;

 private:
  Vocabulary() = default;

  std::vector<std::string> surfaces_;
  std::optional<std::size_t> eos_;
};

// Natural-log probabilities over the K vocabulary entries of one expert call.
// Instances produced by ValidateLogProbs hold finite values <= 0.
class LogProbVector {
 public:
  LogProbVector() = default;

  // Wraps values whose invariants the caller already guarantees (finite, <= 0).
  static LogProbVector FromTrusted(std::vector<double> values,
                                   bool exceeded_tolerance = false) {
    LogProbVector v;
    v.values_ = std::move(values);
    v.exceeded_tolerance_ = exceeded_tolerance;
    return v;
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  // True if some raw input lay above the 1e-9 rounding tolerance before it
  // was floored to 0.
  bool exceeded_tolerance() const { return exceeded_tolerance_; }

 private:
  std::vector<double> values_;
  bool exceeded_tolerance_ = false;
};

struct ContextExample {
  std::string payload;
  std::optional<Token> label;
};

// The ordered private context C_1..C_J together with the grouping used to
// form clipping units. Groups are contiguous; the last may be smaller.
class ExpertSet {
 public:
  static absl::StatusOr<ExpertSet> Create(std::vector<ContextExample> examples,
                                          std::size_t group_size = 1);

  const std::vector<ContextExample>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  std::size_t group_size() const { return group_size_; }
  std::size_t num_groups() const {
    return (examples_.size() + group_size_ - 1) / group_size_;
  }

 private:
  ExpertSet() = default;

  std::vector<ContextExample> examples_;
  std::size_t group_size_ = 1;
};

enum class CompositionMode { kNaive, kAdvanced };

const char* CompositionModeName(CompositionMode mode);
std::optional<CompositionMode> ParseCompositionMode(const std::string& name);

// Full DP configuration of a run. `sigma` is the per-token noise parameter
// derived by accounting; a budget without sigma cannot drive a DP release.
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 0.0;
  int max_tokens = 1;
  double gamma = 2.0;
  std::optional<double> sigma;
  CompositionMode composition = CompositionMode::kNaive;
};

absl::Status ValidateBudget(const PrivacyBudget& budget);

}  // namespace poetry_dp

#endif  // POETRY_DP_CORE_TYPES_H_
