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

#ifndef OBSAUDIT_REPORT_WRITER_H_
#define OBSAUDIT_REPORT_WRITER_H_

#include <string>

#include "absl/status/status.h"
#include "obsaudit/experiment.h"

namespace obsaudit {

// One row per repetition with the columns
//   k,theoretical_eps,proxy_kind,tau,guess_fraction,repetition,c_prime,c,
//   empirical_eps,saturated
// Numbers use the shortest round-trip representation; saturated is 0 or 1.
std::string ReportToCsv(const ExperimentReport& report);

// Config echo, rows and per-cell summaries, schema_version 1.
std::string ReportToJson(const ExperimentReport& report);

// Write to `path`; errors name the path.
absl::Status WriteReportCsv(const ExperimentReport& report,
                            const std::string& path);
absl::Status WriteReportJson(const ExperimentReport& report,
                             const std::string& path);

}  // namespace obsaudit

#endif  // OBSAUDIT_REPORT_WRITER_H_
