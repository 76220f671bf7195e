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

#ifndef POETRY_DP_CORE_ERRORS_H_
#define POETRY_DP_CORE_ERRORS_H_

#include <optional>
#include <string>

#include "absl/status/status.h"

namespace poetry_dp {

// Library-specific error categories. Each error is an absl::Status whose
// canonical code is chosen to match the category, with the category itself
// attached as a payload so callers and tests can tell, for example, a
// NonFinite input apart from a WrongArity one.
enum class ErrorKind {
  kNonFinite,
  kWrongArity,
  kArityMismatch,
  kPositiveLogProb,
  kInfeasible,
  kInvalidArgument,
  kTransport,
  kProtocol,
  kProviderFailure,
  kBudgetUnset,
  kMissingAudit,
  kEmpty,
  kTooFew,
  kConfig,
};

const char* ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, const std::string& message);

// Returns the ErrorKind attached by MakeError, or nullopt for foreign statuses.
std::optional<ErrorKind> GetErrorKind(const absl::Status& status);

inline bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  return GetErrorKind(status) == kind;
}

// Aborts with a message when an internal invariant is broken. Reserved for
// conditions that no input can trigger.
void CheckFailed(const char* file, int line, const char* condition);

#define POETRY_DP_CHECK(condition)                          \
  do {                                                      \
    if (!(condition)) {                                     \
      ::poetry_dp::CheckFailed(__FILE__, __LINE__, #condition); \
    }                                                       \
  } while (false)

}  // namespace poetry_dp

#endif  // POETRY_DP_CORE_ERRORS_H_
