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

#include "obsaudit/report_writer.h"

#include <charconv>
#include <fstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace obsaudit {
namespace {

constexpr char kCsvHeader[] =
    "k,theoretical_eps,proxy_kind,tau,guess_fraction,repetition,c_prime,c,"
    "empirical_eps,saturated\n";

std::string Shortest(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, end);
}

nlohmann::json ConfigToJson(const ExperimentConfig& config) {
  nlohmann::json out;
  out["n"] = config.n;
  out["k"] = config.k;
  out["d"] = config.feature_dim();
  out["eps_list"] = config.eps_list;
  out["proxy_kind"] = std::string(ProxyKindName(config.proxy_kind));
  out["proxy_tau"] = config.proxy_tau;
  out["tau_audit"] = config.tau_audit;
  out["guess_fractions"] = config.guess_fractions;
  out["t"] = config.t;
  out["score_mode"] = std::string(ScoreModeName(config.score_mode));
  out["gamma"] = config.gamma;
  out["delta"] = config.delta;
  out["repetitions"] = config.repetitions;
  out["seed"] = config.base_seed;
  out["sweep"] = config.sweep;
  out["resample_all"] = config.resample_all;
  out["learning_rate"] = config.logistic.learning_rate;
  out["iterations"] = config.logistic.iterations;
  out["l2"] = config.logistic.l2;
  out["mu_min"] = config.family.mu_min;
  out["mu_max"] = config.family.mu_max;
  out["mu_tolerance"] = config.family.tolerance;
  return out;
}

absl::Status WriteFile(const std::string& contents, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot open '", path, "' for writing"));
  }
  out << contents;
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrCat("failed writing '", path, "'"));
  }
  return absl::OkStatus();
}

}  // namespace

std::string ReportToCsv(const ExperimentReport& report) {
  std::string out = kCsvHeader;
  for (const RepetitionRecord& row : report.rows) {
    absl::StrAppend(&out, row.k, ",", Shortest(row.theoretical_eps), ",",
                    row.proxy_kind, ",", Shortest(row.tau), ",",
                    Shortest(row.guess_fraction), ",", row.repetition, ",",
                    row.c_prime, ",", row.c, ",", Shortest(row.empirical_eps),
                    ",", row.saturated ? 1 : 0, "\n");
  }
  return out;
}

std::string ReportToJson(const ExperimentReport& report) {
  nlohmann::json out;
  out["schema_version"] = 1;
  out["config"] = ConfigToJson(report.config);
  nlohmann::json rows = nlohmann::json::array();
  for (const RepetitionRecord& row : report.rows) {
    rows.push_back({{"k", row.k},
                    {"theoretical_eps", row.theoretical_eps},
                    {"proxy_kind", row.proxy_kind},
                    {"tau", row.tau},
                    {"guess_fraction", row.guess_fraction},
                    {"repetition", row.repetition},
                    {"c_prime", row.c_prime},
                    {"c", row.c},
                    {"empirical_eps", row.empirical_eps},
                    {"saturated", row.saturated}});
  }
  out["rows"] = std::move(rows);
  nlohmann::json summaries = nlohmann::json::array();
  for (const GroupSummary& summary : report.summaries) {
    nlohmann::json entry = {{"k", summary.k},
                            {"theoretical_eps", summary.theoretical_eps},
                            {"mean_emp_eps", summary.mean_emp_eps},
                            {"std_emp_eps", summary.std_emp_eps},
                            {"mean_accuracy", summary.mean_accuracy},
                            {"saturated_count", summary.saturated_count}};
    entry["guess_fraction"] =
        summary.guess_fraction.has_value()
            ? nlohmann::json(*summary.guess_fraction)
            : nlohmann::json(nullptr);
    summaries.push_back(std::move(entry));
  }
  out["summaries"] = std::move(summaries);
  out["any_saturated"] = report.any_saturated();
  return out.dump(2) + "\n";
}

absl::Status WriteReportCsv(const ExperimentReport& report,
                            const std::string& path) {
  return WriteFile(ReportToCsv(report), path);
}

absl::Status WriteReportJson(const ExperimentReport& report,
                             const std::string& path) {
  return WriteFile(ReportToJson(report), path);
}

}  // namespace obsaudit
