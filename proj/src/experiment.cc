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

#include "obsaudit/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "obsaudit/game.h"
#include "obsaudit/randomized_response.h"
#include "obsaudit/rng.h"
#include "obsaudit/status_macros.h"

namespace obsaudit {
namespace {

// Stream indices. Base draws use the eps index directly; per-repetition
// draws pack (eps index, repetition) and set bit 40 so they never collide
// with a base draw.
constexpr uint64_t kPerRepetitionBit = uint64_t{1} << 40;

uint64_t RepetitionStreamIndex(size_t eps_index, int repetition) {
  return kPerRepetitionBit | (static_cast<uint64_t>(eps_index) << 24) |
         static_cast<uint64_t>(repetition);
}

absl::Status ParallelFor(int count, int workers,
                         const std::function<absl::Status(int)>& body) {
  std::atomic<int> next{0};
  std::mutex mu;
  absl::Status first_error;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error.ok()) return;
      }
      absl::Status status = body(i);
      if (!status.ok()) {
        std::lock_guard<std::mutex> lock(mu);
        if (first_error.ok()) first_error = std::move(status);
      }
    }
  };
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (std::thread& thread : threads) thread.join();
  }
  return first_error;
}

bool InUnitInterval(double x) { return x >= 0 && x <= 1; }

}  // namespace

std::string_view ProxyKindName(ProxyKind kind) {
  switch (kind) {
    case ProxyKind::kGroundTruth:
      return "ground_truth";
    case ProxyKind::kShifted:
      return "shifted";
    case ProxyKind::kLogistic:
      return "logistic";
  }
  return "unknown";
}

absl::StatusOr<ProxyKind> ParseProxyKind(std::string_view name) {
  if (name == "ground_truth") return ProxyKind::kGroundTruth;
  if (name == "shifted") return ProxyKind::kShifted;
  if (name == "logistic") return ProxyKind::kLogistic;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown proxy kind '", std::string(name),
      "' (expected ground_truth, shifted or logistic)"));
}

absl::Status ExperimentConfig::Validate() const {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (k < 2) {
    return absl::InvalidArgumentError(absl::StrCat("k must be >= 2, got ", k));
  }
  if (d < 1) {
    return absl::InvalidArgumentError(absl::StrCat("d must be >= 1, got ", d));
  }
  if (eps_list.empty()) {
    return absl::InvalidArgumentError("eps_list must not be empty");
  }
  for (double eps : eps_list) {
    if (!(eps >= 0) || std::isinf(eps)) {
      return absl::InvalidArgumentError(
          absl::StrCat("eps values must be finite and >= 0, got ", eps));
    }
  }
  if (proxy_kind == ProxyKind::kShifted && k != 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("the shifted proxy is binary only, got k=", k));
  }
  if (!InUnitInterval(proxy_tau)) {
    return absl::InvalidArgumentError(
        absl::StrCat("proxy_tau must lie in [0, 1], got ", proxy_tau));
  }
  if (!InUnitInterval(tau_audit)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tau_audit must lie in [0, 1], got ", tau_audit));
  }
  if (guess_fractions.empty()) {
    return absl::InvalidArgumentError("guess_fractions must not be empty");
  }
  for (double fraction : guess_fractions) {
    if (!(fraction > 0 && fraction <= 1)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "guess fractions must lie in (0, 1], got ", fraction));
    }
    if (!sweep && GuessCount(fraction, n) < 1) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "guess fraction %g of n=%d rounds to zero guesses", fraction, n));
    }
  }
  if (!(t >= 0) || std::isinf(t)) {
    return absl::InvalidArgumentError(
        absl::StrCat("t must be finite and >= 0, got ", t));
  }
  if (!(gamma > 0 && gamma < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must lie in (0, 1), got ", gamma));
  }
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1), got ", delta));
  }
  if (repetitions < 1 || repetitions >= (1 << 24)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "repetitions must lie in [1, 2^24), got ", repetitions));
  }
  if (eps_list.size() >= (size_t{1} << 16)) {
    return absl::InvalidArgumentError("too many eps values");
  }
  if (workers < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("workers must be >= 0, got ", workers));
  }
  OBSAUDIT_RETURN_IF_ERROR(logistic.Validate());
  OBSAUDIT_RETURN_IF_ERROR(family.Validate());
  return absl::OkStatus();
}

ExperimentConfig ExperimentConfig::Smoke() {
  ExperimentConfig config;
  config.n = 100'000;
  config.repetitions = 20;
  return config;
}

bool ExperimentReport::any_saturated() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const RepetitionRecord& row) { return row.saturated; });
}

const GroupSummary* ExperimentReport::Find(
    double theoretical_eps, std::optional<double> guess_fraction) const {
  for (const GroupSummary& summary : summaries) {
    if (summary.theoretical_eps == theoretical_eps &&
        summary.guess_fraction == guess_fraction) {
      return &summary;
    }
  }
  return nullptr;
}

double Mean(std::span<const double> values) {
  if (values.empty()) return 0;
  double total = 0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double PopulationStd(std::span<const double> values) {
  if (values.empty()) return 0;
  const double mean = Mean(values);
  double total = 0;
  for (double v : values) total += (v - mean) * (v - mean);
  return std::sqrt(total / static_cast<double>(values.size()));
}

absl::StatusOr<ProxyModel> BuildProxy(const ExperimentConfig& config) {
  switch (config.proxy_kind) {
    case ProxyKind::kGroundTruth:
      return ProxyModel::GroundTruth(config.k);
    case ProxyKind::kShifted:
      return ProxyModel::Shifted(config.proxy_tau);
    case ProxyKind::kLogistic: {
      Rng rng = MakeStream(config.base_seed, StreamPurpose::kProxyTraining, 0);
      OBSAUDIT_ASSIGN_OR_RETURN(
          LabeledDataset fresh,
          SampleMixture(config.n, config.k, config.feature_dim(), rng));
      OBSAUDIT_ASSIGN_OR_RETURN(LogisticWeights weights,
                                TrainLogistic(fresh, config.logistic));
      return ProxyModel::Logistic(std::move(weights));
    }
  }
  return absl::InternalError("BuildProxy: unhandled proxy kind");
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               const ExperimentInputs& inputs) {
  OBSAUDIT_RETURN_IF_ERROR(config.Validate());

  LabeledDataset sampled;
  const LabeledDataset* dataset = inputs.dataset;
  if (dataset == nullptr) {
    Rng rng = MakeStream(config.base_seed, StreamPurpose::kDataset, 0);
    OBSAUDIT_ASSIGN_OR_RETURN(
        sampled, SampleMixture(config.n, config.k, config.feature_dim(), rng));
    dataset = &sampled;
  } else {
    OBSAUDIT_RETURN_IF_ERROR(dataset->Validate());
    if (dataset->k != config.k || dataset->n != config.n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "dataset has n=%d k=%d but the config says n=%d k=%d", dataset->n,
          dataset->k, config.n, config.k));
    }
  }

  std::optional<ProxyModel> built_proxy;
  const ProxyModel* proxy = inputs.proxy;
  if (proxy == nullptr) {
    OBSAUDIT_ASSIGN_OR_RETURN(built_proxy, BuildProxy(config));
    proxy = &*built_proxy;
  }
  OBSAUDIT_ASSIGN_OR_RETURN(const ProxyTable table,
                            TabulateProxy(*dataset, *proxy));

  if (proxy->num_classes() != config.k) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "proxy has %d classes but k=%d", proxy->num_classes(), config.k));
  }
  const std::string proxy_name(proxy->name());
  const size_t fractions_per_rep =
      config.sweep ? 1 : config.guess_fractions.size();
  const int workers =
      config.workers > 0
          ? config.workers
          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  ExperimentReport report;
  report.config = config;

  for (size_t e = 0; e < config.eps_list.size(); ++e) {
    const double eps = config.eps_list[e];
    OBSAUDIT_ASSIGN_OR_RETURN(const RandomizedResponse mechanism,
                              RandomizedResponse::Create(eps, config.k));
    std::vector<int> base_noisy;
    if (!config.resample_all) {
      Rng rng = MakeStream(config.base_seed, StreamPurpose::kMechanism, e);
      OBSAUDIT_ASSIGN_OR_RETURN(
          base_noisy, ApplyRandomizedResponse(mechanism, dataset->y0, rng));
    }

    std::vector<std::vector<RepetitionRecord>> per_rep(config.repetitions);
    auto run_repetition = [&](int rep) -> absl::Status {
      const uint64_t stream = RepetitionStreamIndex(e, rep);
      const LabeledDataset* data = dataset;
      const ProxyTable* proxy_table = &table;
      const std::vector<int>* noisy = &base_noisy;
      LabeledDataset local_data;
      ProxyTable local_table;
      std::vector<int> local_noisy;
      if (config.resample_all) {
        Rng data_rng =
            MakeStream(config.base_seed, StreamPurpose::kDataset, stream);
        OBSAUDIT_ASSIGN_OR_RETURN(
            local_data, SampleMixture(config.n, config.k,
                                      config.feature_dim(), data_rng));
        OBSAUDIT_ASSIGN_OR_RETURN(local_table,
                                  TabulateProxy(local_data, *proxy));
        Rng mech_rng =
            MakeStream(config.base_seed, StreamPurpose::kMechanism, stream);
        OBSAUDIT_ASSIGN_OR_RETURN(
            local_noisy,
            ApplyRandomizedResponse(mechanism, local_data.y0, mech_rng));
        data = &local_data;
        proxy_table = &local_table;
        noisy = &local_noisy;
      }

      Rng game_rng = MakeStream(config.base_seed, StreamPurpose::kGame, stream);
      auto artifacts = std::make_shared<const GameArtifacts>(
          SampleGameArtifacts(*proxy_table, game_rng));
      std::vector<int> shown = ShowLabels(data->y0, *artifacts);
      std::vector<double> scores(data->n);
      ScoreWithTable(*noisy, shown, *proxy_table, mechanism, config.t,
                     config.score_mode, scores);

      RepetitionRecord base;
      base.k = config.k;
      base.theoretical_eps = eps;
      base.proxy_kind = proxy_name;
      base.tau = config.tau_audit;
      base.repetition = rep;

      std::vector<RepetitionRecord>& records = per_rep[rep];
      if (config.sweep) {
        ScoredGame scored{std::move(scores), std::move(shown), artifacts};
        OBSAUDIT_ASSIGN_OR_RETURN(
            const GuessSweepResult best,
            BestEpsilonOverGuessSweep(scored, config.guess_fractions,
                                      config.gamma, config.delta,
                                      config.tau_audit, config.family));
        RepetitionRecord record = base;
        record.guess_fraction = best.best_fraction;
        record.c_prime = best.outcome.c_prime;
        record.c = best.outcome.c;
        record.empirical_eps = best.epsilon;
        record.saturated = best.detail.saturated;
        records.push_back(std::move(record));
        return absl::OkStatus();
      }
      for (double fraction : config.guess_fractions) {
        OBSAUDIT_ASSIGN_OR_RETURN(const GuessVector guesses,
                                  MakeGuesses(scores, fraction));
        OBSAUDIT_ASSIGN_OR_RETURN(const AuditOutcome outcome,
                                  Tally(guesses, *artifacts));
        OBSAUDIT_ASSIGN_OR_RETURN(
            const EmpiricalEpsilon empirical,
            ComputeEmpiricalEpsilon(outcome, config.gamma, config.delta,
                                    config.tau_audit, config.family));
        RepetitionRecord record = base;
        record.guess_fraction = fraction;
        record.c_prime = outcome.c_prime;
        record.c = outcome.c;
        record.empirical_eps = empirical.epsilon;
        record.saturated = empirical.saturated;
        records.push_back(std::move(record));
      }
      return absl::OkStatus();
    };
    OBSAUDIT_RETURN_IF_ERROR(
        ParallelFor(config.repetitions, workers, run_repetition));

    for (size_t f = 0; f < fractions_per_rep; ++f) {
      GroupSummary summary;
      summary.k = config.k;
      summary.theoretical_eps = eps;
      if (!config.sweep) summary.guess_fraction = config.guess_fractions[f];
      double accuracy_total = 0;
      int accuracy_count = 0;
      for (int rep = 0; rep < config.repetitions; ++rep) {
        const RepetitionRecord& record = per_rep[rep][f];
        summary.emp_eps.push_back(record.empirical_eps);
        if (record.saturated) ++summary.saturated_count;
        if (record.c_prime > 0) {
          accuracy_total += static_cast<double>(record.c) /
                            static_cast<double>(record.c_prime);
          ++accuracy_count;
        }
        report.rows.push_back(record);
      }
      summary.mean_emp_eps = Mean(summary.emp_eps);
      summary.std_emp_eps = PopulationStd(summary.emp_eps);
      summary.mean_accuracy =
          accuracy_count > 0 ? accuracy_total / accuracy_count : 0.0;
      report.summaries.push_back(std::move(summary));
    }
  }
  return report;
}

}  // namespace obsaudit
