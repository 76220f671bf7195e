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

#ifndef POETRY_DP_EXPERTS_PLANTED_MODEL_H_
#define POETRY_DP_EXPERTS_PLANTED_MODEL_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "poetry_dp/core/rng.h"
#include "poetry_dp/experts/provider.h"

namespace poetry_dp {

// Synthetic model with bounded per-example interaction. A latent state S is
// observed only through i.i.d. views C = A (S + noise * xi), xi ~ N(0, I).
// The unnormalized full-context log-score of candidate y is
//
//   sum_j psi(y, C_j) + R_J(y, C_1..C_J)
//   psi(y, C)  = M * tanh(w_y . C)                     (|psi| <= M)
//   R_J(y, C)  = B * tanh(mean_j pair(C_j, C_{j+1 mod J}, y))  (|R| <= B)
//   pair(a, b, y) = sum_k v_{y,k} a_k b_k
//
// so cross-example interaction is genuinely present but bounded.
struct PlantedModelConfig {
  int num_classes = 4;
  int state_dim = 6;
  int view_dim = 6;
  double view_noise = 1.0;
  double psi_bound = 1.0;       // M
  double residual_bound = 1.0;  // B; 0 disables the residual
  // psi(y, C) = M * tanh(w_y . A S), independent of the view.
  bool constant_psi = false;
  // If > 0, views are drawn uniformly from this many fixed views, which makes
  // the expected contribution exactly computable.
  int finite_views = 0;
  bool uniform_prior = false;
  uint64_t seed = 0;
};

struct PsiEstimate {
  std::vector<double> mean;
  std::vector<double> standard_error;
};

class PlantedModel {
 public:
  using View = std::vector<double>;

  static absl::StatusOr<PlantedModel> Create(PlantedModelConfig config);

  const PlantedModelConfig& config() const { return config_; }
  std::size_t num_classes() const { return config_.num_classes; }
  const std::vector<double>& state() const { return state_; }
  const std::vector<double>& log_prior() const { return log_prior_; }

  View SampleView(RngStream& rng) const;
  std::vector<View> SampleViews(std::size_t count, RngStream& rng) const;

  double Psi(std::size_t y, std::span<const double> view) const;
  double Residual(std::size_t y, std::span<const View> views) const;

  // sum_j psi(y, C_j) + R_J(y, C_1..C_J) for every candidate y.
  std::vector<double> FullContextLogits(std::span<const View> views) const;

  // Full-context distribution at J = views.size():
  //   p_J(y) proportional to prior(y) * exp(FullContextLogits(y) / J).
  // Scores are averaged over the J views before normalizing; for J = 1 this
  // is prior(y) * exp(psi(y, C_1) + R_1).
  std::vector<double> FullContextDistribution(std::span<const View> views) const;

  // Expected contribution psi_bar(y) = E_C[psi(y, C)]: exact enumeration for a
  // finite view space, otherwise a Monte-Carlo mean over n_mc fresh views.
  PsiEstimate ExpectedPsi(std::size_t n_mc, RngStream& rng) const;
  // Exact psi_bar; InvalidArgument unless the view space is finite.
  absl::StatusOr<std::vector<double>> ExactExpectedPsi() const;
  // Monte-Carlo psi_bar even when the view space is finite.
  PsiEstimate MonteCarloPsi(std::size_t n_mc, RngStream& rng) const;

  // p_star(y) proportional to prior(y) * exp(psi_bar(y)).
  std::vector<double> LimitDistribution(std::size_t n_mc, RngStream& rng) const;
  std::vector<double> LimitFromPsi(std::span<const double> psi_bar) const;

 private:
  PlantedModel() = default;

  PlantedModelConfig config_;
  std::vector<double> state_;
  std::vector<std::vector<double>> projection_;  // view_dim x state_dim
  std::vector<std::vector<double>> psi_weights_;       // K x view_dim
  std::vector<std::vector<double>> residual_weights_;  // K x view_dim
  std::vector<double> log_prior_;
  std::vector<View> finite_views_;
};

std::string EncodeView(std::span<const double> view);
absl::StatusOr<PlantedModel::View> DecodeView(const std::string& payload);

// Provider view of a planted model. Context payloads are EncodeView()
// strings. Query() returns the per-view (psi only) expert
// log-softmax(sum_{C in group} psi(., C)); FullContext() returns
// log p_J over all given views, or the prior for a zero-shot call.
class PlantedViewExpert : public ExpertProvider {
 public:
  explicit PlantedViewExpert(std::shared_ptr<const PlantedModel> model);

  const Vocabulary& vocabulary() const override { return vocabulary_; }
  ProviderDescriptor descriptor() const override { return {"planted"}; }

 protected:
  absl::StatusOr<std::vector<double>> DoQuery(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> group) override;
  absl::StatusOr<std::vector<double>> DoFullContext(
      std::span<const Token> prefix, const std::string& query,
      std::span<const ContextExample> examples) override;

 private:
  std::shared_ptr<const PlantedModel> model_;
  Vocabulary vocabulary_;
};

}  // namespace poetry_dp

#endif  // POETRY_DP_EXPERTS_PLANTED_MODEL_H_
