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

#include "poetry_dp/experts/remote_expert.h"

#include <chrono>
#include <thread>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"

namespace poetry_dp {

using json = nlohmann::json;

absl::StatusOr<std::pair<std::string, std::string>> SplitEndpoint(
    const std::string& endpoint) {
  const std::string::size_type scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("endpoint '", endpoint, "' has no scheme"));
  }
  const std::string scheme = endpoint.substr(0, scheme_end);
  if (scheme != "http") {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("unsupported scheme '", scheme, "'"));
  }
  const std::string::size_type path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return std::make_pair(endpoint, std::string());
  std::string path = endpoint.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return std::make_pair(endpoint.substr(0, path_start), path);
}

absl::StatusOr<std::unique_ptr<RemoteExpert>> RemoteExpert::Create(
    Vocabulary vocabulary, RemoteExpertConfig config) {
  auto parts = SplitEndpoint(config.endpoint);
  if (!parts.ok()) return parts.status();
  if (config.timeout_ms <= 0 || config.retries < 0 || config.max_in_flight < 1 ||
      config.backoff_ms < 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "timeout and in-flight limit must be positive, retries and "
                     "backoff non-negative");
  }
  return std::unique_ptr<RemoteExpert>(
      new RemoteExpert(std::move(vocabulary), std::move(config),
                       parts->first, parts->second));
}

RemoteExpert::RemoteExpert(Vocabulary vocabulary, RemoteExpertConfig config,
                           std::string scheme_host_port, std::string path)
    : vocabulary_(std::move(vocabulary)),
      config_(std::move(config)),
      scheme_host_port_(std::move(scheme_host_port)),
      path_(std::move(path)) {}

RemoteExpertStats RemoteExpert::stats() const {
  return {requests_.load(), retries_.load(), cache_hits_.load()};
}

std::string RemoteExpert::BuildRequestBody(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> context) const {
  json body;
  body["context"] = JoinPayloads(context);
  json prefix_json = json::array();
  for (const Token& t : prefix) {
    prefix_json.push_back(t.id < vocabulary_.size() ? vocabulary_.surface(t.id)
                                                    : t.surface.value_or(""));
  }
  body["prefix"] = std::move(prefix_json);
  body["query"] = query;
  body["candidates"] = vocabulary_.surfaces();
  return body.dump();
}

absl::StatusOr<std::vector<double>> RemoteExpert::ParseResponse(
    const std::string& body) const {
  const json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object() ||
      !parsed.contains("logprobs") || !parsed["logprobs"].is_array()) {
    return MakeError(ErrorKind::kProtocol,
                     absl::StrCat("response is not {\"logprobs\": [...]}: ",
                                  body.substr(0, 200)));
  }
  std::vector<double> values;
  for (const auto& v : parsed["logprobs"]) {
    if (!v.is_number()) {
      return MakeError(ErrorKind::kProtocol, "non-numeric log-prob in response");
    }
    values.push_back(v.get<double>());
  }
  auto validated = ValidateLogProbs(values, vocabulary_.size());
  if (!validated.ok()) return validated.status();
  if (validated->exceeded_tolerance()) {
    return MakeError(ErrorKind::kProtocol, "response log-probs must be <= 0");
  }
  return values;
}

absl::StatusOr<std::vector<double>> RemoteExpert::Post(const std::string& body) {
  {
    std::unique_lock<std::mutex> lock(slots_mu_);
    slots_cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  struct SlotRelease {
    RemoteExpert* self;
    ~SlotRelease() {
      {
        std::lock_guard<std::mutex> lock(self->slots_mu_);
        --self->in_flight_;
      }
      self->slots_cv_.notify_one();
    }
  } release{this};

  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const std::string path = path_ + "/v1/logprobs";

  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      if (config_.backoff_ms > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(config_.backoff_ms * attempt));
      }
    }
    ++requests_;
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      last_error = absl::StrCat("connection error: ", httplib::to_string(res.error()));
      continue;
    }
    if (res->status != 200) {
      last_error = absl::StrCat("HTTP ", res->status);
      continue;
    }
    return ParseResponse(res->body);
  }
  return MakeError(ErrorKind::kTransport,
                   absl::StrCat(last_error, " from ", scheme_host_port_, path,
                                " after ", config_.retries + 1, " attempts"));
}

absl::StatusOr<std::vector<double>> RemoteExpert::Call(const std::string& body) {
  if (!config_.stochastic) {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = cache_.find(body);
    if (it != cache_.end()) {
      ++cache_hits_;
      return it->second;
    }
  }
  auto result = Post(body);
  if (result.ok() && !config_.stochastic) {
    std::lock_guard<std::mutex> lock(cache_mu_);
    cache_.emplace(body, *result);
  }
  return result;
}

absl::StatusOr<std::vector<double>> RemoteExpert::DoQuery(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> group) {
  return Call(BuildRequestBody(prefix, query, group));
}

absl::StatusOr<std::vector<double>> RemoteExpert::DoFullContext(
    std::span<const Token> prefix, const std::string& query,
    std::span<const ContextExample> examples) {
  return Call(BuildRequestBody(prefix, query, examples));
}

}  // namespace poetry_dp
