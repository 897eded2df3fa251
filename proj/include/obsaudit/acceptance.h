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

#ifndef OBSAUDIT_ACCEPTANCE_H_
#define OBSAUDIT_ACCEPTANCE_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace obsaudit {

struct AcceptanceOptions {
  // Smoke mode runs only the deterministic criteria (6 and 7) unless
  // `criteria` names others explicitly, and then runs those at n = 1e5 with
  // 20 repetitions. Thresholds are never relaxed.
  bool smoke = false;
  uint64_t seed = 20261018;
  int workers = 0;
  // Criterion ids 1..7 to run; empty means the default set for the mode.
  std::vector<int> criteria;
  // Progress messages; may be null.
  std::ostream* log = nullptr;
};

struct CriterionResult {
  int id = 0;
  std::string description;
  bool passed = false;
  std::string detail;
};

// Runs the statistical and deterministic acceptance criteria of the audit.
// An error status means a criterion could not be evaluated at all; a failed
// criterion is reported through CriterionResult::passed.
absl::StatusOr<std::vector<CriterionResult>> RunAcceptanceSuite(
    const AcceptanceOptions& options);

// "PASS  [n] description: detail" or "FAIL  ..." for one result.
std::string FormatCriterion(const CriterionResult& result);

}  // namespace obsaudit

#endif  // OBSAUDIT_ACCEPTANCE_H_
