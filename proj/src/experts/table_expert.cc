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

#include "poetry_dp/experts/table_expert.h"

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"

namespace poetry_dp {

absl::StatusOr<std::vector<double>> TableExpert::DoQuery(
    std::span<const Token> /*prefix*/, const std::string& /*query*/,
    std::span<const ContextExample> group) {
  if (group.empty()) return zero_shot_;
  std::vector<double> sum(vocabulary_.size(), 0.0);
  for (const auto& ex : group) {
    auto it = table_.find(ex.payload);
    if (it == table_.end()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("no table entry for '", ex.payload, "'"));
    }
    for (std::size_t i = 0; i < sum.size() && i < it->second.size(); ++i) {
      sum[i] += it->second[i];
    }
  }
  return sum;
}

absl::StatusOr<std::vector<double>> TableExpert::DoFullContext(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> examples) {
  auto sum = DoQuery(prefix, query, examples);
  if (!sum.ok()) return sum;
  const double z = LogSumExp(*sum);
  for (double& x : *sum) x -= z;
  return sum;
}

}  // namespace poetry_dp
