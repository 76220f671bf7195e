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

#include "poetry_dp/experts/provider.h"

#include "poetry_dp/core/logprob.h"
#include "poetry_dp/core/rng.h"

namespace poetry_dp {

absl::StatusOr<LogProbVector> ExpertProvider::Check(
    absl::StatusOr<std::vector<double>> raw) {
  if (!raw.ok()) return raw.status();
  auto validated = ValidateLogProbs(*raw, vocabulary().size());
  if (!validated.ok()) return validated.status();
  if (auto s = RequireWithinTolerance(*validated); !s.ok()) return s;
  return validated;
}

absl::StatusOr<LogProbVector> ExpertProvider::Query(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> group) {
  ++query_calls_;
  return Check(DoQuery(prefix, query, group));
}

absl::StatusOr<LogProbVector> ExpertProvider::FullContext(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> examples) {
  ++full_context_calls_;
  return Check(DoFullContext(prefix, query, examples));
}

uint64_t DigestCall(std::span<const Token> prefix, const std::string& query,
                    std::span<const ContextExample> examples) {
  uint64_t h = CombineIds({0x70726566ULL, prefix.size()});
  for (const Token& t : prefix) h = CombineIds({h, t.id});
  h = CombineIds({h, HashBytes(query)});
  for (const auto& ex : examples) {
    h = CombineIds({h, HashBytes(ex.payload),
                    ex.label.has_value() ? ex.label->id + 1 : 0});
  }
  return h;
}

std::string JoinPayloads(std::span<const ContextExample> examples) {
  std::string out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += examples[i].payload;
  }
  return out;
}

}  // namespace poetry_dp
