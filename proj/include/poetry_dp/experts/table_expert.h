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

#ifndef POETRY_DP_EXPERTS_TABLE_EXPERT_H_
#define POETRY_DP_EXPERTS_TABLE_EXPERT_H_

#include <map>
#include <string>
#include <vector>

#include "poetry_dp/experts/provider.h"

namespace poetry_dp {

// Looks up a fixed log-prob vector per context payload. Group and full-context
// calls sum the members' vectors (the latter renormalized); a zero-shot call
// returns `zero_shot`. Useful for exact, enumerable audits.
class TableExpert : public ExpertProvider {
 public:
  TableExpert(Vocabulary vocabulary, std::map<std::string, std::vector<double>> table,
              std::vector<double> zero_shot = {})
      : vocabulary_(std::move(vocabulary)),
        table_(std::move(table)),
        zero_shot_(std::move(zero_shot)) {
    if (zero_shot_.empty()) zero_shot_.assign(vocabulary_.size(), 0.0);
  }

  const Vocabulary& vocabulary() const override { return vocabulary_; }
  ProviderDescriptor descriptor() const override { return {"table"}; }

 protected:
  absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> group) override;
  absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> examples) override;

 private:
  Vocabulary vocabulary_;
  std::map<std::string, std::vector<double>> table_;
  std::vector<double> zero_shot_;
};

}  // namespace poetry_dp

#endif  // POETRY_DP_EXPERTS_TABLE_EXPERT_H_
