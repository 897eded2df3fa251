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

#include "obsaudit/randomized_response.h"

#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"

namespace obsaudit {

RandomizedResponse::RandomizedResponse(double epsilon, int num_classes)
    : epsilon_(epsilon), num_classes_(num_classes) {
  // e^eps / (e^eps + k - 1) rewritten to stay finite for large eps.
  const double odds_other = (num_classes - 1) * std::exp(-epsilon);
  keep_prob_ = 1.0 / (1.0 + odds_other);
  flip_prob_ = std::exp(-epsilon) / (1.0 + odds_other);
}

absl::StatusOr<RandomizedResponse> RandomizedResponse::Create(
    double epsilon, int num_classes) {
  if (!(epsilon >= 0) || std::isinf(epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "RandomizedResponse: epsilon must be finite and non-negative, got ",
        epsilon));
  }
  if (num_classes < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "RandomizedResponse: need at least 2 classes, got ", num_classes));
  }
  return RandomizedResponse(epsilon, num_classes);
}

double RandomizedResponse::PosteriorOf(int label, int noisy_label,
                                       double prior_label,
                                       double prior_noisy) const {
  const double evidence =
      prior_noisy * keep_prob_ + (1.0 - prior_noisy) * flip_prob_;
  return prior_label * Kernel(noisy_label, label) / evidence;
}

absl::StatusOr<std::vector<int>> ApplyRandomizedResponse(
    const RandomizedResponse& mechanism, std::span<const int> labels,
    Rng& rng) {
  const int k = mechanism.num_classes();
  std::uniform_int_distribution<int> other(0, k - 2);
  std::vector<int> noisy(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 0 || y >= k) {
      return absl::InvalidArgumentError(absl::StrCat(
          "ApplyRandomizedResponse: label ", y, " at index ", i,
          " outside [0, ", k, ")"));
    }
    if (UniformDouble(rng) < mechanism.keep_prob()) {
      noisy[i] = y;
    } else {
      const int j = other(rng);
      noisy[i] = j >= y ? j + 1 : j;
    }
  }
  return noisy;
}

absl::StatusOr<std::vector<double>> RandomizedResponsePosterior(
    const RandomizedResponse& mechanism, int noisy_label,
    std::span<const double> prior) {
  const int k = mechanism.num_classes();
  if (static_cast<int>(prior.size()) != k) {
    return absl::InvalidArgumentError(
        absl::StrCat("RandomizedResponsePosterior: prior has ", prior.size(),
                     " entries, expected ", k));
  }
  if (noisy_label < 0 || noisy_label >= k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "RandomizedResponsePosterior: noisy label ", noisy_label,
        " outside [0, ", k, ")"));
  }
  const double prior_mass = std::accumulate(prior.begin(), prior.end(), 0.0);
  if (std::abs(prior_mass - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrCat(
        "RandomizedResponsePosterior: prior sums to ", prior_mass));
  }
  std::vector<double> posterior(k);
  double total = 0;
  for (int y = 0; y < k; ++y) {
    posterior[y] = prior[y] * mechanism.Kernel(noisy_label, y);
    total += posterior[y];
  }
  if (!(total > 0) || std::isinf(total)) {
    return absl::FailedPreconditionError(
        "RandomizedResponsePosterior: posterior has zero total mass");
  }
  for (double& p : posterior) p /= total;
  return posterior;
}

}  // namespace obsaudit
