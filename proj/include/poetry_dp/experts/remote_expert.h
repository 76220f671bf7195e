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

#ifndef POETRY_DP_EXPERTS_REMOTE_EXPERT_H_
#define POETRY_DP_EXPERTS_REMOTE_EXPERT_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/experts/provider.h"

namespace poetry_dp {

struct RemoteExpertConfig {
  // Base URL, e.g. "http://127.0.0.1:8080" or "http://host:port/prefix".
  std::string endpoint;
  int timeout_ms = 10000;
  // Additional attempts after the first failed one.
  int retries = 3;
  int backoff_ms = 50;
  int max_in_flight = 4;
  // Declares that the server samples; disables the request cache.
  bool stochastic = false;
};

struct RemoteExpertStats {
  uint64_t requests = 0;  // HTTP attempts, including retries
  uint64_t retries = 0;
  uint64_t cache_hits = 0;
};

// Client for the log-prob wire protocol:
//
//   POST {endpoint}/v1/logprobs
//   {"context": str, "prefix": [str], "query": str, "candidates": [str]}
//   200 -> {"logprobs": [number]}  (natural-log, aligned with candidates)
//
// A group's payloads are joined with blank lines to form "context". Non-200
// statuses and connection failures are retried; once the retry budget is
// spent they surface as Transport errors. Malformed bodies are Protocol
// errors and a wrong number of values is a WrongArity error. Identical
// request bodies are answered from an in-memory cache unless the server is
// declared stochastic.
class RemoteExpert : public ExpertProvider {
 public:
  static absl::StatusOr<std::unique_ptr<RemoteExpert>> Create(
      Vocabulary vocabulary, RemoteExpertConfig config);

  const Vocabulary& vocabulary() const override { return vocabulary_; }
  ProviderDescriptor descriptor() const override {
    return {"remote", false, config_.stochastic};
  }

  RemoteExpertStats stats() const;

  // Request body for one call; exposed so tests can pin the wire format.
  std::string BuildRequestBody(std::span<const Token> prefix,
                               const std::string& query,
                               std::span<const ContextExample> context) const;

 protected:
  absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> group) override;
  absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> examples) override;

 private:
  RemoteExpert(Vocabulary vocabulary, RemoteExpertConfig config,
               std::string scheme_host_port, std::string path);

  absl::StatusOr<std::vector<double>> Call(const std::string& body);
  absl::StatusOr<std::vector<double>> Post(const std::string& body);
  absl::StatusOr<std::vector<double>> ParseResponse(const std::string& body) const;

  Vocabulary vocabulary_;
  RemoteExpertConfig config_;
  std::string scheme_host_port_;
  std::string path_;

  std::mutex cache_mu_;
  std::map<std::string, std::vector<double>> cache_;

  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  int in_flight_ = 0;

  std::atomic<uint64_t> requests_{0};
  std::atomic<uint64_t> retries_{0};
  std::atomic<uint64_t> cache_hits_{0};
};

// Splits "http://host:port/prefix" into ("http://host:port", "/prefix").
absl::StatusOr<std::pair<std::string, std::string>> SplitEndpoint(
    const std::string& endpoint);

}  // namespace poetry_dp

#endif  // POETRY_DP_EXPERTS_REMOTE_EXPERT_H_
