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

#ifndef OBSAUDIT_LOGISTIC_REGRESSION_H_
#define OBSAUDIT_LOGISTIC_REGRESSION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obsaudit/gaussian_mixture.h"

namespace obsaudit {

struct LogisticConfig {
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1e-4;

  absl::Status Validate() const;
};

// Multinomial logistic regression parameters, row-major k x (d + 1) with the
// bias in the last column: p(y | x) = softmax(W x + b).
struct LogisticWeights {
  int k = 0;
  int d = 0;
  std::vector<double> w;

  std::span<const double> class_row(int c) const {
    return std::span<const double>(w).subspan(
        static_cast<size_t>(c) * (d + 1), d + 1);
  }
  // `out` must have k entries and x exactly d.
  void PredictInto(std::span<const double> x, std::span<double> out) const;
};

// Mean cross-entropy of softmax(W z + b) on (features, labels) plus
// (l2 / 2) ||W||^2 over the non-bias weights.
class LogisticObjective {
 public:
  LogisticObjective(std::span<const double> features,
                    std::span<const int> labels, int d, int k, double l2);

  int num_params() const { return k_ * (d_ + 1); }
  double Loss(std::span<const double> w) const;
  // Writes the gradient into `grad` (num_params entries) and returns the loss.
  double LossAndGradient(std::span<const double> w,
                         std::span<double> grad) const;

 private:
  std::span<const double> features_;
  std::span<const int> labels_;
  int64_t n_;
  int d_;
  int k_;
  double l2_;
};

struct TrainingTrace {
  // Objective after every accepted step, starting with the initial value.
  std::vector<double> loss;
  int step_halvings = 0;
};

// Full-batch gradient descent on standardized features, halving the step
// whenever it would increase the objective. The returned weights act on raw
// features (the standardization is folded in).
absl::StatusOr<LogisticWeights> TrainLogistic(const LabeledDataset& data,
                                              const LogisticConfig& config,
                                              TrainingTrace* trace = nullptr);

}  // namespace obsaudit

#endif  // OBSAUDIT_LOGISTIC_REGRESSION_H_
