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

#ifndef OBSAUDIT_PROXY_MODEL_H_
#define OBSAUDIT_PROXY_MODEL_H_

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obsaudit/logistic_regression.h"
#include "obsaudit/rng.h"

namespace obsaudit {

// The approximate conditional label distribution D' | x from which
// counterfactual labels are drawn. Immutable once built.
class ProxyModel {
 public:
  enum class Kind { kGroundTruth, kShifted, kLogistic };

  // The exact mixture posterior softmax(x[0..k-1]).
  static absl::StatusOr<ProxyModel> GroundTruth(int num_classes);
  // Binary: (1 - p', p') with p' = min(Pr[y = 1 | x] + tau, 1).
  static absl::StatusOr<ProxyModel> Shifted(double tau);
  static absl::StatusOr<ProxyModel> Logistic(LogisticWeights weights);

  Kind kind() const;
  int num_classes() const { return num_classes_; }
  // Shift of a kShifted proxy, 0 otherwise.
  double tau() const;
  // Weights of a kLogistic proxy, nullptr otherwise.
  const LogisticWeights* logistic_weights() const;
  // "ground_truth", "shifted" or "logistic".
  std::string_view name() const;

  absl::StatusOr<std::vector<double>> PredictProba(
      std::span<const double> x) const;
  // Allocation-free variant; `out` must have num_classes() entries.
  absl::Status PredictProbaInto(std::span<const double> x,
                                std::span<double> out) const;

  // One draw from Multinoulli(PredictProba(x)).
  absl::StatusOr<int> SampleCounterfactual(std::span<const double> x,
                                           Rng& rng) const;

 private:
  struct GroundTruthProxy {};
  struct ShiftedProxy {
    double tau;
  };
  using Repr = std::variant<GroundTruthProxy, ShiftedProxy, LogisticWeights>;

  ProxyModel(Repr repr, int num_classes)
      : repr_(std::move(repr)), num_classes_(num_classes) {}

  Repr repr_;
  int num_classes_;
};

// Draws an index from a probability vector by inversion of one uniform.
int SampleCategorical(std::span<const double> proba, Rng& rng);

// Logistic proxies only. Text format:
//
//   obsaudit-logistic 1
//   k <k> d <d>
//   <d + 1 weights, bias last>     (k lines)
absl::Status SaveProxyModel(const ProxyModel& model, const std::string& path);
absl::StatusOr<ProxyModel> LoadProxyModel(const std::string& path);

}  // namespace obsaudit

#endif  // OBSAUDIT_PROXY_MODEL_H_
