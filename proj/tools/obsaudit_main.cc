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

// Command-line front end:
//
//   obsaudit synth        --seed S --out data.csv [--n --k --d]
//   obsaudit train-proxy  --seed S --out model.txt [--dataset data.csv]
//   obsaudit audit-rr     --seed S [--config run.ini] [experiment keys...]
//   obsaudit check        [--smoke] [--criteria 6,7]
//
// Every subcommand accepts --config FILE with flat `key = value` lines
// (lists as `a, b` or `[a, b]`); each key is also a flag of the same name,
// and flags win over the file.
//
// Exit codes: 0 success, 1 runtime failure or failed criterion (check),
// 2 configuration error, 3 saturated estimates under --strict (audit-rr).

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/match.h"
#include "obsaudit/acceptance.h"
#include "obsaudit/dataset_io.h"
#include "obsaudit/experiment.h"
#include "obsaudit/gaussian_mixture.h"
#include "obsaudit/logistic_regression.h"
#include "obsaudit/proxy_model.h"
#include "obsaudit/report_writer.h"
#include "obsaudit/rng.h"

namespace obsaudit {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSaturated = 3;

// Invalid user input maps to the configuration exit code, anything else to a
// runtime failure.
int ReportError(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return status.code() == absl::StatusCode::kInvalidArgument ||
                 status.code() == absl::StatusCode::kOutOfRange ||
                 status.code() == absl::StatusCode::kNotFound
             ? kExitConfig
             : kExitRuntime;
}

// CLI11 only reads config files attached to the top-level app, so the file
// named by --config is expanded here into ordinary `--key=value` flags
// placed right after the subcommand. Keys also given on the command line are
// skipped, which makes flags win over the file. List values are joined with
// commas, the delimiter of every list option.
absl::StatusOr<std::vector<std::string>> ExpandConfigFile(
    std::vector<std::string> args) {
  std::string path;
  bool found = false;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        return absl::InvalidArgumentError("--config needs a file name");
      }
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      found = true;
      break;
    }
    if (absl::StartsWith(args[i], "--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      found = true;
      break;
    }
  }
  if (!found) return args;

  const auto subcommand = std::find_if(
      args.begin(), args.end(),
      [](const std::string& arg) { return !absl::StartsWith(arg, "-"); });
  if (subcommand == args.end()) {
    return absl::InvalidArgumentError("--config needs a subcommand");
  }
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error& e) {
    return absl::NotFoundError(
        absl::StrCat("cannot read config file '", path, "': ", e.what()));
  }

  auto given_on_command_line = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& arg) {
      return arg == flag || absl::StartsWith(arg, flag + "=");
    });
  };
  std::vector<std::string> expanded;
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty() &&
        !(item.parents.size() == 1 && item.parents[0] == *subcommand)) {
      return absl::InvalidArgumentError(
          absl::StrCat("config file '", path, "': key '", item.fullname(),
                       "' is not in a flat or [", *subcommand, "] section"));
    }
    const std::string flag = absl::StrCat("--", item.name);
    if (given_on_command_line(flag)) continue;
    expanded.push_back(
        absl::StrCat(flag, "=", absl::StrJoin(item.inputs, ",")));
  }
  args.insert(subcommand + 1, expanded.begin(), expanded.end());
  return args;
}

struct SynthArgs {
  int64_t n = 1'000'000;
  int k = 2;
  int d = 5;
  uint64_t seed = 0;
  std::string out;
};

struct TrainArgs {
  int64_t n = 1'000'000;
  int k = 2;
  int d = 5;
  uint64_t seed = 0;
  std::string dataset;
  std::string out;
  LogisticConfig logistic;
};

struct AuditArgs {
  ExperimentConfig config;
  std::string proxy_kind = "ground_truth";
  std::string score_mode = "indicator";
  std::string dataset;
  std::string proxy_model;
  std::string out_csv;
  std::string out_json;
  bool strict = false;
};

struct CheckArgs {
  bool smoke = false;
  uint64_t seed = AcceptanceOptions().seed;
  int workers = 0;
  std::vector<int> criteria;
  bool quiet = false;
};

void AddShapeOptions(CLI::App& app, int64_t& n, int& k, int& d) {
  app.add_option("--n", n, "Number of samples")->check(CLI::PositiveNumber);
  app.add_option("--k", k, "Number of classes")->check(CLI::Range(2, 64));
  app.add_option("--d", d, "Feature dimension (raised to k if smaller)")
      ->check(CLI::PositiveNumber);
}

void AddLogisticOptions(CLI::App& app, LogisticConfig& logistic) {
  app.add_option("--learning_rate", logistic.learning_rate,
                 "Initial gradient-descent step");
  app.add_option("--iterations", logistic.iterations,
                 "Gradient-descent iterations");
  app.add_option("--l2", logistic.l2, "L2 penalty on non-bias weights");
}

int RunSynth(const SynthArgs& args) {
  const int d = std::max(args.d, args.k);
  Rng rng = MakeStream(args.seed, StreamPurpose::kDataset, 0);
  absl::StatusOr<LabeledDataset> data = SampleMixture(args.n, args.k, d, rng);
  if (!data.ok()) return ReportError(data.status());
  if (absl::Status s = WriteDataset(*data, args.out); !s.ok()) {
    return ReportError(s);
  }
  std::cout << "wrote " << data->n << " samples (k=" << data->k
            << ", d=" << data->d << ") to " << args.out << "\n";
  return kExitOk;
}

int RunTrainProxy(const TrainArgs& args) {
  if (absl::Status s = args.logistic.Validate(); !s.ok()) {
    return ReportError(s);
  }
  absl::StatusOr<LabeledDataset> data;
  if (!args.dataset.empty()) {
    data = ReadDataset(args.dataset);
  } else {
    Rng rng = MakeStream(args.seed, StreamPurpose::kProxyTraining, 0);
    data = SampleMixture(args.n, args.k, std::max(args.d, args.k), rng);
  }
  if (!data.ok()) return ReportError(data.status());
  TrainingTrace trace;
  absl::StatusOr<LogisticWeights> weights =
      TrainLogistic(*data, args.logistic, &trace);
  if (!weights.ok()) return ReportError(weights.status());
  absl::StatusOr<ProxyModel> model = ProxyModel::Logistic(*std::move(weights));
  if (!model.ok()) return ReportError(model.status());
  if (absl::Status s = SaveProxyModel(*model, args.out); !s.ok()) {
    return ReportError(s);
  }
  std::cout << "trained on " << data->n << " samples, loss "
            << trace.loss.front() << " -> " << trace.loss.back() << ", saved "
            << args.out << "\n";
  return kExitOk;
}

int RunAuditRr(AuditArgs& args, const CLI::App& app) {
  ExperimentConfig& config = args.config;
  absl::StatusOr<ProxyKind> kind = ParseProxyKind(args.proxy_kind);
  if (!kind.ok()) return ReportError(kind.status());
  config.proxy_kind = *kind;
  absl::StatusOr<ScoreMode> mode = ParseScoreMode(args.score_mode);
  if (!mode.ok()) return ReportError(mode.status());
  config.score_mode = *mode;

  std::optional<LabeledDataset> dataset;
  if (!args.dataset.empty()) {
    absl::StatusOr<LabeledDataset> loaded = ReadDataset(args.dataset);
    if (!loaded.ok()) return ReportError(loaded.status());
    if ((app.count("--n") > 0 && config.n != loaded->n) ||
        (app.count("--k") > 0 && config.k != loaded->k)) {
      return ReportError(absl::InvalidArgumentError(absl::StrCat(
          "--n/--k disagree with the dataset file (n=", loaded->n,
          ", k=", loaded->k, ")")));
    }
    config.n = loaded->n;
    config.k = loaded->k;
    config.d = loaded->d;
    dataset = *std::move(loaded);
  }
  std::optional<ProxyModel> proxy;
  if (!args.proxy_model.empty()) {
    if (app.count("--proxy_kind") > 0 &&
        config.proxy_kind != ProxyKind::kLogistic) {
      return ReportError(absl::InvalidArgumentError(
          "--proxy_model requires proxy_kind = logistic"));
    }
    config.proxy_kind = ProxyKind::kLogistic;
    absl::StatusOr<ProxyModel> loaded = LoadProxyModel(args.proxy_model);
    if (!loaded.ok()) return ReportError(loaded.status());
    proxy = *std::move(loaded);
  }
  if (absl::Status s = config.Validate(); !s.ok()) return ReportError(s);

  ExperimentInputs inputs;
  if (dataset.has_value()) inputs.dataset = &*dataset;
  if (proxy.has_value()) inputs.proxy = &*proxy;
  absl::StatusOr<ExperimentReport> report = RunExperiment(config, inputs);
  if (!report.ok()) return ReportError(report.status());

  if (!args.out_csv.empty()) {
    if (absl::Status s = WriteReportCsv(*report, args.out_csv); !s.ok()) {
      return ReportError(s);
    }
  } else {
    std::cout << ReportToCsv(*report);
  }
  if (!args.out_json.empty()) {
    if (absl::Status s = WriteReportJson(*report, args.out_json); !s.ok()) {
      return ReportError(s);
    }
  }
  for (const GroupSummary& summary : report->summaries) {
    std::cerr << "eps=" << summary.theoretical_eps << " fraction="
              << (summary.guess_fraction.has_value()
                      ? absl::StrCat(*summary.guess_fraction)
                      : std::string("sweep"))
              << " mean_emp_eps=" << summary.mean_emp_eps
              << " std=" << summary.std_emp_eps
              << " saturated=" << summary.saturated_count << "\n";
  }
  if (report->any_saturated()) {
    std::cerr << "warning: some estimates hit mu_max and are only lower "
                 "bounds\n";
    if (args.strict) return kExitSaturated;
  }
  return kExitOk;
}

int RunCheck(const CheckArgs& args) {
  AcceptanceOptions options;
  options.smoke = args.smoke;
  options.seed = args.seed;
  options.workers = args.workers;
  options.criteria = args.criteria;
  if (!args.quiet) options.log = &std::cerr;
  absl::StatusOr<std::vector<CriterionResult>> results =
      RunAcceptanceSuite(options);
  if (!results.ok()) return ReportError(results.status());
  bool all_passed = true;
  for (const CriterionResult& result : *results) {
    std::cout << FormatCriterion(result) << "\n";
    all_passed = all_passed && result.passed;
  }
  return all_passed ? kExitOk : kExitRuntime;
}

int Main(int argc, char** argv) {
  CLI::App app{"Observational label-DP audit of randomized response",
               "obsaudit"};
  app.require_subcommand(1);
  // Only listed in --help; ExpandConfigFile consumes it before parsing.
  std::string config_file;

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Sample a mixture dataset and write it");
  synth_cmd->add_option("--config", config_file,
                         "Flat key = value file; flags override it");
  AddShapeOptions(*synth_cmd, synth.n, synth.k, synth.d);
  synth_cmd->add_option("--seed", synth.seed, "Base seed")->required();
  synth_cmd->add_option("--out", synth.out, "Output dataset file")
      ->required();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand(
      "train-proxy", "Fit a logistic proxy and save its weights");
  train_cmd->add_option("--config", config_file,
                         "Flat key = value file; flags override it");
  AddShapeOptions(*train_cmd, train.n, train.k, train.d);
  AddLogisticOptions(*train_cmd, train.logistic);
  train_cmd->add_option("--seed", train.seed, "Base seed");
  train_cmd->add_option("--dataset", train.dataset,
                        "Train on this dataset file instead of a fresh "
                        "sample");
  train_cmd->add_option("--out", train.out, "Output model file")->required();

  AuditArgs audit;
  ExperimentConfig& config = audit.config;
  CLI::App* audit_cmd = app.add_subcommand(
      "audit-rr", "Audit randomized response with the observational game");
  audit_cmd->add_option("--config", config_file,
                         "Flat key = value file; flags override it");
  AddShapeOptions(*audit_cmd, config.n, config.k, config.d);
  audit_cmd->add_option("--eps_list", config.eps_list,
                        "Theoretical epsilons of the mechanism")
      ->delimiter(',');
  audit_cmd->add_option("--proxy_kind", audit.proxy_kind,
                        "ground_truth, shifted or logistic");
  audit_cmd->add_option("--proxy_tau", config.proxy_tau,
                        "Shift of the shifted proxy");
  audit_cmd->add_option("--tau_audit", config.tau_audit,
                        "Total-variation budget the audit accounts for");
  audit_cmd->add_option("--guess_fractions", config.guess_fractions,
                        "Fractions of samples guessed on")
      ->delimiter(',');
  audit_cmd->add_option("--t", config.t, "Exponent of the second score term");
  audit_cmd->add_option("--score_mode", audit.score_mode,
                        "indicator or posterior reading of the noisy label");
  audit_cmd->add_option("--gamma", config.gamma, "Audit confidence level");
  audit_cmd->add_option("--delta", config.delta, "Delta of reported epsilon");
  audit_cmd->add_option("--repetitions", config.repetitions,
                        "Games per epsilon");
  audit_cmd->add_option("--seed", config.base_seed, "Base seed")->required();
  audit_cmd->add_flag("--sweep", config.sweep,
                      "Report the best fraction per repetition");
  audit_cmd->add_flag("--resample_all", config.resample_all,
                      "Redraw dataset and mechanism noise per repetition");
  audit_cmd->add_option("--workers", config.workers,
                        "Worker threads (0 = hardware concurrency)");
  AddLogisticOptions(*audit_cmd, config.logistic);
  audit_cmd->add_option("--mu_min", config.family.mu_min,
                        "Smallest Gaussian-DP mu searched");
  audit_cmd->add_option("--mu_max", config.family.mu_max,
                        "Largest Gaussian-DP mu searched");
  audit_cmd->add_option("--mu_tolerance", config.family.tolerance,
                        "Bisection tolerance in mu");
  audit_cmd->add_option("--dataset", audit.dataset,
                        "Use this dataset file instead of sampling one");
  audit_cmd->add_option("--proxy_model", audit.proxy_model,
                        "Use this saved logistic proxy");
  audit_cmd->add_option("--out_csv", audit.out_csv,
                        "Per-repetition CSV (stdout when omitted)");
  audit_cmd->add_option("--out_json", audit.out_json, "JSON report");
  audit_cmd->add_flag("--strict", audit.strict,
                      "Exit with code 3 when any estimate is saturated");

  CheckArgs check;
  CLI::App* check_cmd =
      app.add_subcommand("check", "Run the property and acceptance suites");
  check_cmd->add_option("--config", config_file,
                         "Flat key = value file; flags override it");
  check_cmd->add_flag("--smoke", check.smoke,
                      "Deterministic criteria only, reduced sizes");
  check_cmd->add_option("--seed", check.seed, "Base seed");
  check_cmd->add_option("--workers", check.workers,
                        "Worker threads (0 = hardware concurrency)");
  check_cmd->add_option("--criteria", check.criteria,
                        "Criterion ids to run (1..7)")
      ->delimiter(',');
  check_cmd->add_flag("--quiet", check.quiet, "No progress output");

  absl::StatusOr<std::vector<std::string>> args =
      ExpandConfigFile(std::vector<std::string>(argv + 1, argv + argc));
  if (!args.ok()) return ReportError(args.status());
  // CLI11 consumes the vector from the back.
  std::reverse(args->begin(), args->end());
  try {
    app.parse(*args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (synth_cmd->parsed()) return RunSynth(synth);
  if (train_cmd->parsed()) return RunTrainProxy(train);
  if (audit_cmd->parsed()) return RunAuditRr(audit, *audit_cmd);
  if (check_cmd->parsed()) return RunCheck(check);
  return kExitConfig;
}

}  // namespace
}  // namespace obsaudit

int main(int argc, char** argv) { return obsaudit::Main(argc, argv); }
