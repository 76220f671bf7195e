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

#include "poetry_dp/core/errors.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "absl/strings/cord.h"

namespace poetry_dp {
namespace {

constexpr char kPayloadUrl[] = "type.poetry-dp/error-kind";

constexpr std::array<ErrorKind, 14> kAllKinds = {
    ErrorKind::kNonFinite,       ErrorKind::kWrongArity,
    ErrorKind::kArityMismatch,   ErrorKind::kPositiveLogProb,
    ErrorKind::kInfeasible,      ErrorKind::kInvalidArgument,
    ErrorKind::kTransport,       ErrorKind::kProtocol,
    ErrorKind::kProviderFailure, ErrorKind::kBudgetUnset,
    ErrorKind::kMissingAudit,    ErrorKind::kEmpty,
    ErrorKind::kTooFew,          ErrorKind::kConfig,
};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kTransport:
      return absl::StatusCode::kUnavailable;
    case ErrorKind::kProtocol:
    case ErrorKind::kProviderFailure:
      return absl::StatusCode::kInternal;
    case ErrorKind::kBudgetUnset:
    case ErrorKind::kMissingAudit:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kInfeasible:
      return absl::StatusCode::kOutOfRange;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonFinite:
      return "NonFinite";
    case ErrorKind::kWrongArity:
      return "WrongArity";
    case ErrorKind::kArityMismatch:
      return "ArityMismatch";
    case ErrorKind::kPositiveLogProb:
      return "PositiveLogProb";
    case ErrorKind::kInfeasible:
      return "Infeasible";
    case ErrorKind::kInvalidArgument:
      return "InvalidArgument";
    case ErrorKind::kTransport:
      return "Transport";
    case ErrorKind::kProtocol:
      return "Protocol";
    case ErrorKind::kProviderFailure:
      return "ProviderFailure";
    case ErrorKind::kBudgetUnset:
      return "BudgetUnset";
    case ErrorKind::kMissingAudit:
      return "MissingAudit";
    case ErrorKind::kEmpty:
      return "Empty";
    case ErrorKind::kTooFew:
      return "TooFew";
    case ErrorKind::kConfig:
      return "Config";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, const std::string& message) {
  absl::Status status(CodeFor(kind),
                      std::string(ErrorKindName(kind)) + ": " + message);
  status.SetPayload(kPayloadUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (ErrorKind kind : kAllKinds) {
    if (name == ErrorKindName(kind)) return kind;
  }
  return std::nullopt;
}

void CheckFailed(const char* file, int line, const char* condition) {
  std::fprintf(stderr, "%s:%d: check failed: %s\n", file, line, condition);
  std::abort();
}

}  // namespace poetry_dp
