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

#include "poetry_dp/experts/planted_model.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "poetry_dp/core/errors.h"
#include "poetry_dp/core/logprob.h"

namespace poetry_dp {
namespace {

constexpr char kViewPrefix[] = "view:";

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<std::vector<double>> GaussianMatrix(int rows, int cols, double scale,
                                                RngStream& rng) {
  std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
  for (auto& row : m) {
    for (double& x : row) x = scale * rng.Normal();
  }
  return m;
}

Vocabulary PlantedVocabulary(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(absl::StrCat("y", i));
  return *Vocabulary::Create(std::move(names));
}

}  // namespace

absl::StatusOr<PlantedModel> PlantedModel::Create(PlantedModelConfig config) {
  if (config.num_classes < 2 || config.state_dim < 1 || config.view_dim < 1) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "planted model needs >= 2 classes and positive dimensions");
  }
  if (!(config.psi_bound > 0) || !std::isfinite(config.psi_bound) ||
      !(config.residual_bound >= 0) || !std::isfinite(config.residual_bound)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "bounds must satisfy M > 0, B >= 0, both finite");
  }
  if (!(config.view_noise >= 0) || config.finite_views < 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "view_noise and finite_views must be non-negative");
  }
  PlantedModel model;
  model.config_ = config;
  RngStream rng(config.seed, CombineIds({0x706c616e74ULL}));
  model.state_.resize(config.state_dim);
  for (double& s : model.state_) s = rng.Normal();
  model.projection_ = GaussianMatrix(config.view_dim, config.state_dim,
                                     1.0 / std::sqrt(config.state_dim), rng);
  model.psi_weights_ = GaussianMatrix(config.num_classes, config.view_dim,
                                      1.0 / std::sqrt(config.view_dim), rng);
  model.residual_weights_ = GaussianMatrix(config.num_classes, config.view_dim,
                                           1.0 / std::sqrt(config.view_dim), rng);
  model.log_prior_.assign(config.num_classes, 0.0);
  if (!config.uniform_prior) {
    for (double& x : model.log_prior_) x = 0.5 * rng.Normal();
  }
  const double z = LogSumExp(model.log_prior_);
  for (double& x : model.log_prior_) x -= z;
  if (config.finite_views > 0) {
    // finite_views_ is still empty here, so these come from the continuous
    // sampler and then become the fixed support.
    RngStream view_rng = rng.Derive(1);
    model.finite_views_ = model.SampleViews(config.finite_views, view_rng);
  }
  return model;
}

PlantedModel::View PlantedModel::SampleView(RngStream& rng) const {
  if (!finite_views_.empty()) {
    return finite_views_[rng.UniformInt(finite_views_.size())];
  }
  std::vector<double> noisy(state_);
  for (double& x : noisy) x += config_.view_noise * rng.Normal();
  View view(config_.view_dim);
  for (int r = 0; r < config_.view_dim; ++r) view[r] = Dot(projection_[r], noisy);
  return view;
}

std::vector<PlantedModel::View> PlantedModel::SampleViews(std::size_t count,
                                                          RngStream& rng) const {
  std::vector<View> views;
  views.reserve(count);
  for (std::size_t j = 0; j < count; ++j) views.push_back(SampleView(rng));
  return views;
}

double PlantedModel::Psi(std::size_t y, std::span<const double> view) const {
  double activation;
  if (config_.constant_psi) {
    activation = 0.0;
    for (int r = 0; r < config_.view_dim; ++r) {
      activation += psi_weights_[y][r] * Dot(projection_[r], state_);
    }
  } else {
    activation = Dot(psi_weights_[y], view);
  }
  const double psi = config_.psi_bound * std::tanh(activation);
  POETRY_DP_CHECK(std::abs(psi) <= config_.psi_bound);
  return psi;
}

double PlantedModel::Residual(std::size_t y, std::span<const View> views) const {
  if (config_.residual_bound == 0.0 || views.empty()) return 0.0;
  const std::size_t j_count = views.size();
  double mean_pair = 0.0;
  for (std::size_t j = 0; j < j_count; ++j) {
    const View& a = views[j];
    const View& b = views[(j + 1) % j_count];
    double pair = 0.0;
    for (int k = 0; k < config_.view_dim; ++k) {
      pair += residual_weights_[y][k] * a[k] * b[k];
    }
    mean_pair += pair;
  }
  mean_pair /= static_cast<double>(j_count);
  const double r = config_.residual_bound * std::tanh(mean_pair);
  POETRY_DP_CHECK(std::abs(r) <= config_.residual_bound);
  return r;
}

std::vector<double> PlantedModel::FullContextLogits(
    std::span<const View> views) const {
  std::vector<double> logits(num_classes(), 0.0);
  for (std::size_t y = 0; y < logits.size(); ++y) {
    for (const View& v : views) logits[y] += Psi(y, v);
    logits[y] += Residual(y, views);
  }
  return logits;
}

std::vector<double> PlantedModel::FullContextDistribution(
    std::span<const View> views) const {
  std::vector<double> scores = log_prior_;
  if (!views.empty()) {
    const std::vector<double> logits = FullContextLogits(views);
    const double inv_j = 1.0 / static_cast<double>(views.size());
    for (std::size_t y = 0; y < scores.size(); ++y) scores[y] += logits[y] * inv_j;
  }
  return LogNormalize(scores);
}

PsiEstimate PlantedModel::MonteCarloPsi(std::size_t n_mc, RngStream& rng) const {
  const std::size_t k = num_classes();
  std::vector<double> sum(k, 0.0), sum_sq(k, 0.0);
  for (std::size_t n = 0; n < n_mc; ++n) {
    const View v = SampleView(rng);
    for (std::size_t y = 0; y < k; ++y) {
      const double p = Psi(y, v);
      sum[y] += p;
      sum_sq[y] += p * p;
    }
  }
  PsiEstimate est;
  est.mean.resize(k);
  est.standard_error.resize(k);
  const double n = static_cast<double>(n_mc);
  for (std::size_t y = 0; y < k; ++y) {
    est.mean[y] = sum[y] / n;
    const double var =
        n_mc > 1 ? std::max(0.0, (sum_sq[y] - n * est.mean[y] * est.mean[y]) /
                                     (n - 1.0))
                 : 0.0;
    est.standard_error[y] = std::sqrt(var / n);
  }
  return est;
}

absl::StatusOr<std::vector<double>> PlantedModel::ExactExpectedPsi() const {
  if (finite_views_.empty()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "exact expectation needs a finite view space");
  }
  std::vector<double> mean(num_classes(), 0.0);
  for (const View& v : finite_views_) {
    for (std::size_t y = 0; y < mean.size(); ++y) mean[y] += Psi(y, v);
  }
  for (double& m : mean) m /= static_cast<double>(finite_views_.size());
  return mean;
}

PsiEstimate PlantedModel::ExpectedPsi(std::size_t n_mc, RngStream& rng) const {
  if (!finite_views_.empty()) {
    return PsiEstimate{*ExactExpectedPsi(),
                       std::vector<double>(num_classes(), 0.0)};
  }
  return MonteCarloPsi(n_mc, rng);
}

std::vector<double> PlantedModel::LimitFromPsi(
    std::span<const double> psi_bar) const {
  std::vector<double> scores = log_prior_;
  for (std::size_t y = 0; y < scores.size(); ++y) scores[y] += psi_bar[y];
  return LogNormalize(scores);
}

std::vector<double> PlantedModel::LimitDistribution(std::size_t n_mc,
                                                    RngStream& rng) const {
  return LimitFromPsi(ExpectedPsi(n_mc, rng).mean);
}

std::string EncodeView(std::span<const double> view) {
  std::string out = kViewPrefix;
  char buf[32];
  for (std::size_t i = 0; i < view.size(); ++i) {
    if (i > 0) out += ',';
    std::snprintf(buf, sizeof(buf), "%.17g", view[i]);
    out += buf;
  }
  return out;
}

absl::StatusOr<PlantedModel::View> DecodeView(const std::string& payload) {
  const std::string prefix = kViewPrefix;
  if (payload.compare(0, prefix.size(), prefix) != 0) {
    return MakeError(ErrorKind::kInvalidArgument, "payload is not a view");
  }
  PlantedModel::View view;
  const char* p = payload.c_str() + prefix.size();
  while (*p != '\0') {
    char* end = nullptr;
    view.push_back(std::strtod(p, &end));
    if (end == p) {
      return MakeError(ErrorKind::kInvalidArgument, "malformed view payload");
    }
    p = end;
    if (*p == ',') ++p;
  }
  return view;
}

PlantedViewExpert::PlantedViewExpert(std::shared_ptr<const PlantedModel> model)
    : model_(std::move(model)),
      vocabulary_(PlantedVocabulary(model_->num_classes())) {}

absl::StatusOr<std::vector<double>> PlantedViewExpert::DoQuery(
    std::span<const Token> /*prefix*/, const std::string& /*query*/,
    std::span<const ContextExample> group) {
  std::vector<double> logits(model_->num_classes(), 0.0);
  for (const auto& ex : group) {
    auto view = DecodeView(ex.payload);
    if (!view.ok()) return view.status();
    for (std::size_t y = 0; y < logits.size(); ++y) {
      logits[y] += model_->Psi(y, *view);
    }
  }
  const double z = LogSumExp(logits);
  for (double& x : logits) x -= z;
  return logits;
}

absl::StatusOr<std::vector<double>> PlantedViewExpert::DoFullContext(
    std::span<const Token> /*prefix*/, const std::string& /*query*/,
    std::span<const ContextExample> examples) {
  std::vector<PlantedModel::View> views;
  for (const auto& ex : examples) {
    auto view = DecodeView(ex.payload);
    if (!view.ok()) return view.status();
    views.push_back(*std::move(view));
  }
  std::vector<double> p = model_->FullContextDistribution(views);
  for (double& x : p) x = std::log(x);
  return p;
}

}  // namespace poetry_dp
