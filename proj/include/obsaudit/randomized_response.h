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

#ifndef OBSAUDIT_RANDOMIZED_RESPONSE_H_
#define OBSAUDIT_RANDOMIZED_RESPONSE_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "obsaudit/rng.h"

namespace obsaudit {

// k-ary randomized response over labels {0, ..., k-1}: keep the label with
// probability e^eps / (e^eps + k - 1), otherwise report one of the other k-1
// labels uniformly. Satisfies eps-label-DP exactly.
class RandomizedResponse {
 public:
  static absl::StatusOr<RandomizedResponse> Create(double epsilon,
                                                   int num_classes);

  double epsilon() const { return epsilon_; }
  int num_classes() const { return num_classes_; }
  double keep_prob() const { return keep_prob_; }
  // Probability of each specific other label.
  double flip_prob() const { return flip_prob_; }

  // K(output | input).
  double Kernel(int output, int input) const {
    return output == input ? keep_prob_ : flip_prob_;
  }

  // Posterior probability that the true label was `label`, given the noisy
  // output and only the prior masses of `label` and `noisy_label` (the prior
  // must sum to one). Same value as RandomizedResponsePosterior()[label].
  double PosteriorOf(int label, int noisy_label, double prior_label,
                     double prior_noisy) const;

 private:
  RandomizedResponse(double epsilon, int num_classes);

  double epsilon_;
  int num_classes_;
  double keep_prob_;
  double flip_prob_;
};

// Applies the mechanism independently to every label.
absl::StatusOr<std::vector<int>> ApplyRandomizedResponse(
    const RandomizedResponse& mechanism, std::span<const int> labels,
    Rng& rng);

// Bayes posterior over the true label given one noisy label:
// posterior[y] proportional to prior[y] K(noisy_label | y).
absl::StatusOr<std::vector<double>> RandomizedResponsePosterior(
    const RandomizedResponse& mechanism, int noisy_label,
    std::span<const double> prior);

}  // namespace obsaudit

#endif  // OBSAUDIT_RANDOMIZED_RESPONSE_H_
