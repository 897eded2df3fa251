// Copyright 2026 The Obsaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "obsaudit/logistic_regression.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"

namespace obsaudit {
namespace {

constexpr int kMaxHalvings = 60;
constexpr int kMaxClasses = 64;

}  // namespace

absl::Status LogisticConfig::Validate() const {
  if (!(learning_rate > 0) || std::isinf(learning_rate)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "LogisticConfig: learning_rate must be positive, got ",
        learning_rate));
  }
  if (iterations < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "LogisticConfig: iterations must be non-negative, got ", iterations));
  }
  if (!(l2 >= 0) || std::isinf(l2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("LogisticConfig: l2 must be non-negative, got ", l2));
  }
  return absl::OkStatus();
}

void LogisticWeights::PredictInto(std::span<const double> x,
                                  std::span<double> out) const {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < k; ++c) {
    std::span<const double> row = class_row(c);
    double logit = row[d];
    for (int j = 0; j < d; ++j) logit += row[j] * x[j];
    out[c] = logit;
    max_logit = std::max(max_logit, logit);
  }
  double total = 0;
  for (int c = 0; c < k; ++c) {
    out[c] = std::exp(out[c] - max_logit);
    total += out[c];
  }
  for (int c = 0; c < k; ++c) out[c] /= total;
}

LogisticObjective::LogisticObjective(std::span<const double> features,
                                     std::span<const int> labels, int d, int k,
                                     double l2)
    : features_(features),
      labels_(labels),
      n_(static_cast<int64_t>(labels.size())),
      d_(d),
      k_(k),
      l2_(l2) {}

double LogisticObjective::Loss(std::span<const double> w) const {
  std::vector<double> scratch(num_params());
  return LossAndGradient(w, scratch);
}

double LogisticObjective::LossAndGradient(std::span<const double> w,
                                          std::span<double> grad) const {
  const int stride = d_ + 1;
  std::fill(grad.begin(), grad.end(), 0.0);
  double logits[kMaxClasses];
  double data_loss = 0;
  for (int64_t i = 0; i < n_; ++i) {
    const double* z = features_.data() + static_cast<size_t>(i) * d_;
    double max_logit = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < k_; ++c) {
      const double* row = w.data() + c * stride;
      double logit = row[d_];
      for (int j = 0; j < d_; ++j) logit += row[j] * z[j];
      logits[c] = logit;
      max_logit = std::max(max_logit, logit);
    }
    double total = 0;
    for (int c = 0; c < k_; ++c) {
      logits[c] = std::exp(logits[c] - max_logit);
      total += logits[c];
    }
    const int y = labels_[i];
    data_loss -= std::log(logits[y] / total);
    for (int c = 0; c < k_; ++c) {
      const double residual = logits[c] / total - (c == y ? 1.0 : 0.0);
      double* g = grad.data() + c * stride;
      for (int j = 0; j < d_; ++j) g[j] += residual * z[j];
      g[d_] += residual;
    }
  }
  const double inv_n = n_ > 0 ? 1.0 / static_cast<double>(n_) : 0.0;
  double penalty = 0;
  for (int c = 0; c < k_; ++c) {
    for (int j = 0; j <= d_; ++j) {
      const int idx = c * stride + j;
      grad[idx] *= inv_n;
      if (j < d_) {
        grad[idx] += l2_ * w[idx];
        penalty += w[idx] * w[idx];
      }
    }
  }
  return data_loss * inv_n + 0.5 * l2_ * penalty;
}

absl::StatusOr<LogisticWeights> TrainLogistic(const LabeledDataset& data,
                                              const LogisticConfig& config,
                                              TrainingTrace* trace) {
  if (absl::Status status = config.Validate(); !status.ok()) return status;
  if (absl::Status status = data.Validate(); !status.ok()) return status;
  if (data.n == 0) {
    return absl::InvalidArgumentError("TrainLogistic: empty training set");
  }
  if (data.k > kMaxClasses) {
    return absl::InvalidArgumentError(absl::StrCat(
        "TrainLogistic: at most ", kMaxClasses, " classes, got ", data.k));
  }
  const int d = data.d;
  const int k = data.k;

  std::vector<double> mean(d, 0.0), scale(d, 0.0);
  for (int64_t i = 0; i < data.n; ++i) {
    for (int j = 0; j < d; ++j) mean[j] += data.row(i)[j];
  }
  for (double& m : mean) m /= static_cast<double>(data.n);
  for (int64_t i = 0; i < data.n; ++i) {
    for (int j = 0; j < d; ++j) {
      const double c = data.row(i)[j] - mean[j];
      scale[j] += c * c;
    }
  }
  for (double& s : scale) {
    s = std::sqrt(s / static_cast<double>(data.n));
    if (!(s > 0)) s = 1.0;
  }
  std::vector<double> standardized(data.x.size());
  for (int64_t i = 0; i < data.n; ++i) {
    for (int j = 0; j < d; ++j) {
      standardized[static_cast<size_t>(i) * d + j] =
          (data.row(i)[j] - mean[j]) / scale[j];
    }
  }

  LogisticObjective objective(standardized, data.y0, d, k, config.l2);
  const int p = objective.num_params();
  std::vector<double> w(p, 0.0), grad(p), candidate(p), candidate_grad(p);
  double loss = objective.LossAndGradient(w, grad);
  if (trace != nullptr) trace->loss.assign(1, loss);

  double step = config.learning_rate;
  for (int it = 0; it < config.iterations; ++it) {
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      for (int q = 0; q < p; ++q) candidate[q] = w[q] - step * grad[q];
      const double candidate_loss =
          objective.LossAndGradient(candidate, candidate_grad);
      if (!std::isfinite(candidate_loss)) {
        return absl::InternalError(absl::StrCat(
            "TrainLogistic: non-finite loss at iteration ", it));
      }
      if (candidate_loss <= loss) {
        w.swap(candidate);
        grad.swap(candidate_grad);
        loss = candidate_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
      if (trace != nullptr) ++trace->step_halvings;
    }
    if (!accepted) break;  // No descent left at machine precision.
    if (trace != nullptr) trace->loss.push_back(loss);
  }

  LogisticWeights model;
  model.k = k;
  model.d = d;
  model.w.assign(p, 0.0);
  for (int c = 0; c < k; ++c) {
    const double* src = w.data() + c * (d + 1);
    double* dst = model.w.data() + c * (d + 1);
    double bias = src[d];
    for (int j = 0; j < d; ++j) {
      dst[j] = src[j] / scale[j];
      bias -= src[j] * mean[j] / scale[j];
    }
    dst[d] = bias;
  }
  return model;
}

}  // namespace obsaudit
