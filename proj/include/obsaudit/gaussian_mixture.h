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

#ifndef OBSAUDIT_GAUSSIAN_MIXTURE_H_
#define OBSAUDIT_GAUSSIAN_MIXTURE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obsaudit/rng.h"

namespace obsaudit {

// n labelled points with d features each, stored row-major.
struct LabeledDataset {
  int64_t n = 0;
  int k = 0;
  int d = 0;
  std::vector<double> x;
  std::vector<int> y0;

  std::span<const double> row(int64_t i) const {
    return std::span<const double>(x).subspan(static_cast<size_t>(i) * d, d);
  }

  // Shape, label range and finiteness checks.
  absl::Status Validate() const;
};

// Balanced k-class mixture: y uniform on {0..k-1}, x | y ~ N(e_y, I_d).
// Requires 2 <= k <= d.
absl::StatusOr<LabeledDataset> SampleMixture(int64_t n, int k, int d,
                                             Rng& rng);

// Exact posterior of y given x for the mixture above: softmax(x[0..k-1]).
absl::StatusOr<std::vector<double>> TruePosterior(std::span<const double> x,
                                                  int k);
// Allocation-free variant; `out` must have k entries and x at least k.
void TruePosteriorInto(std::span<const double> x, std::span<double> out);

// Binary only: min(Pr[y = 1 | x] + tau, 1). Within total variation tau of the
// true conditional label distribution.
absl::StatusOr<double> ShiftedPosterior(std::span<const double> x, int k,
                                        double tau);

}  // namespace obsaudit

#endif  // OBSAUDIT_GAUSSIAN_MIXTURE_H_
