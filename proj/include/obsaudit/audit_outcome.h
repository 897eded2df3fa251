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

#ifndef OBSAUDIT_AUDIT_OUTCOME_H_
#define OBSAUDIT_AUDIT_OUTCOME_H_

#include <cstdint>

#include "absl/status/status.h"

namespace obsaudit {

// Summary of one game transcript: m canaries, c_prime non-abstaining guesses,
// c of which were correct.
struct AuditOutcome {
  int64_t m = 0;
  int64_t c_prime = 0;
  int64_t c = 0;

  // Checks m >= 1 and 0 <= c <= c_prime <= m.
  absl::Status Validate() const;

  friend bool operator==(const AuditOutcome&, const AuditOutcome&) = default;
};

}  // namespace obsaudit

#endif  // OBSAUDIT_AUDIT_OUTCOME_H_
