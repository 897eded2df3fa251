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

#ifndef OBSAUDIT_EXPERIMENT_H_
#define OBSAUDIT_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obsaudit/audit.h"
#include "obsaudit/game.h"
#include "obsaudit/gaussian_mixture.h"
#include "obsaudit/logistic_regression.h"
#include "obsaudit/proxy_model.h"
#include "obsaudit/tradeoff.h"

namespace obsaudit {

enum class ProxyKind { kGroundTruth, kShifted, kLogistic };

std::string_view ProxyKindName(ProxyKind kind);
absl::StatusOr<ProxyKind> ParseProxyKind(std::string_view name);

// Randomized-response audit on synthetic mixture data. Defaults follow the
// reference setup: n = 1e6, d = 5, gamma = 0.05, delta = 1e-5, t = 2,
// guess fractions {0.1%, 1%}, 100 repetitions.
struct ExperimentConfig {
  int64_t n = 1'000'000;
  int k = 2;
  // Feature dimension; raised to k when smaller, since class means are the
  // unit vectors e_y.
  int d = 5;
  std::vector<double> eps_list = {1.0, 2.0, 4.0};
  ProxyKind proxy_kind = ProxyKind::kGroundTruth;
  // Shift of the shifted proxy (binary only).
  double proxy_tau = 0.0;
  // Total-variation budget the audit accounts for.
  double tau_audit = 0.0;
  std::vector<double> guess_fractions = {0.001, 0.01};
  double t = 2.0;
  ScoreMode score_mode = ScoreMode::kIndicator;
  double gamma = kDefaultGamma;
  double delta = kDefaultDelta;
  int repetitions = 100;
  uint64_t base_seed = 0;
  // Report the best epsilon over all guess fractions per repetition instead
  // of one row per fraction.
  bool sweep = false;
  // Redraw dataset and mechanism output for every repetition, not only the
  // game artifacts. The proxy is still built once.
  bool resample_all = false;
  LogisticConfig logistic;
  GaussianFamily family;
  // Worker threads for repetitions; 0 picks the hardware concurrency.
  int workers = 0;

  absl::Status Validate() const;
  int feature_dim() const { return d < k ? k : d; }

  // n = 1e5 and 20 repetitions, everything else default.
  static ExperimentConfig Smoke();
};

// Optional pre-built inputs; when absent they are generated from the config.
struct ExperimentInputs {
  const LabeledDataset* dataset = nullptr;
  const ProxyModel* proxy = nullptr;
};

struct RepetitionRecord {
  int k = 0;
  double theoretical_eps = 0;
  std::string proxy_kind;
  double tau = 0;
  double guess_fraction = 0;
  int repetition = 0;
  int64_t c_prime = 0;
  int64_t c = 0;
  double empirical_eps = 0;
  bool saturated = false;
};

// Statistics over the repetitions of one (eps, fraction) cell. The standard
// deviation is the population one (divides by the number of repetitions) and
// covers game resampling only unless resample_all is set.
struct GroupSummary {
  int k = 0;
  double theoretical_eps = 0;
  // Unset in sweep mode.
  std::optional<double> guess_fraction;
  double mean_emp_eps = 0;
  double std_emp_eps = 0;
  std::vector<double> emp_eps;
  // Mean of c / c' over repetitions with at least one guess.
  double mean_accuracy = 0;
  int saturated_count = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  // Ordered by eps, then fraction, then repetition.
  std::vector<RepetitionRecord> rows;
  std::vector<GroupSummary> summaries;

  bool any_saturated() const;
  const GroupSummary* Find(double theoretical_eps,
                           std::optional<double> guess_fraction) const;
};

// The report is a pure function of the config (and inputs): repetitions use
// independent streams derived from base_seed, so the thread count does not
// change the result.
absl::StatusOr<ExperimentReport> RunExperiment(
    const ExperimentConfig& config, const ExperimentInputs& inputs = {});

// Builds the proxy the config asks for. Logistic proxies are trained on a
// fresh sample of the same distribution drawn from the proxy-training stream.
absl::StatusOr<ProxyModel> BuildProxy(const ExperimentConfig& config);

// Population mean and standard deviation.
double Mean(std::span<const double> values);
double PopulationStd(std::span<const double> values);

}  // namespace obsaudit

#endif  // OBSAUDIT_EXPERIMENT_H_
