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

#include "obsaudit/gaussian_mixture.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"

namespace obsaudit {

absl::Status LabeledDataset::Validate() const {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("LabeledDataset: k must be >= 2, got ", k));
  }
  if (d < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("LabeledDataset: d must be >= 1, got ", d));
  }
  if (n < 0 || static_cast<int64_t>(y0.size()) != n ||
      static_cast<int64_t>(x.size()) != n * d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "LabeledDataset: shape mismatch (n=", n, ", d=", d,
        ", |x|=", x.size(), ", |y0|=", y0.size(), ")"));
  }
  for (int64_t i = 0; i < n; ++i) {
    if (y0[i] < 0 || y0[i] >= k) {
      return absl::InvalidArgumentError(absl::StrCat(
          "LabeledDataset: label ", y0[i], " at row ", i, " outside [0, ", k,
          ")"));
    }
  }
  for (size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "LabeledDataset: non-finite feature at row ", j / d));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<LabeledDataset> SampleMixture(int64_t n, int k, int d,
                                             Rng& rng) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("SampleMixture: k must be >= 2, got ", k));
  }
  if (d < k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "SampleMixture: the class means e_y need d >= k, got d=", d,
        " k=", k));
  }
  if (n < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("SampleMixture: n must be non-negative, got ", n));
  }
  LabeledDataset data;
  data.n = n;
  data.k = k;
  data.d = d;
  data.x.resize(static_cast<size_t>(n) * d);
  data.y0.resize(n);
  std::uniform_int_distribution<int> label(0, k - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int64_t i = 0; i < n; ++i) {
    const int y = label(rng);
    data.y0[i] = y;
    double* row = data.x.data() + static_cast<size_t>(i) * d;
    for (int j = 0; j < d; ++j) row[j] = noise(rng);
    row[y] += 1.0;
  }
  return data;
}

void TruePosteriorInto(std::span<const double> x, std::span<double> out) {
  const size_t k = out.size();
  const double max_logit = *std::max_element(x.begin(), x.begin() + k);
  double total = 0;
  for (size_t y = 0; y < k; ++y) {
    out[y] = std::exp(x[y] - max_logit);
    total += out[y];
  }
  for (size_t y = 0; y < k; ++y) out[y] /= total;
}

absl::StatusOr<std::vector<double>> TruePosterior(std::span<const double> x,
                                                  int k) {
  if (k < 2 || static_cast<int>(x.size()) < k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "TruePosterior: need 2 <= k <= |x|, got k=", k, " |x|=", x.size()));
  }
  std::vector<double> posterior(k);
  TruePosteriorInto(x, posterior);
  return posterior;
}

absl::StatusOr<double> ShiftedPosterior(std::span<const double> x, int k,
                                        double tau) {
  if (k != 2) {
    return absl::UnimplementedError(absl::StrCat(
        "ShiftedPosterior: only binary labels are supported, got k=", k));
  }
  if (!(tau >= 0 && tau <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ShiftedPosterior: tau must lie in [0, 1], got ", tau));
  }
  if (x.size() < 2) {
    return absl::InvalidArgumentError("ShiftedPosterior: need |x| >= 2");
  }
  double posterior[2];
  TruePosteriorInto(x, posterior);
  return std::min(posterior[1] + tau, 1.0);
}

}  // namespace obsaudit
