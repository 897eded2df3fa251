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

#ifndef OBSAUDIT_AUDIT_H_
#define OBSAUDIT_AUDIT_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "obsaudit/audit_outcome.h"
#include "obsaudit/game.h"
#include "obsaudit/tradeoff.h"

namespace obsaudit {

inline constexpr double kDefaultGamma = 0.05;
inline constexpr double kDefaultDelta = 1e-5;

// The arrays of the decision recursion, both indexed 0..c.
struct AuditRecursionState {
  std::vector<double> r;
  std::vector<double> h;
};

// Runs the recursion
//   r[c] = gamma c / m,  h[c] = gamma (c' - c) / m,
//   h[i] = fbar^-1(r[i+1]),  r[i] = r[i+1] + i / (c' - i) (h[i] - h[i+1])
// for i = c-1 .. 0 and returns the arrays. Requires c_prime >= 1.
absl::StatusOr<AuditRecursionState> RunAuditRecursion(
    const TradeoffFunction& f, const AuditOutcome& outcome, double gamma);

// Returns false when r[0] + h[0] >= c'/m, i.e. when a mechanism satisfying f
// would produce at least c correct guesses with probability at most gamma and
// the claim f is rejected. Returns true (not rejected) otherwise, and always
// when c_prime == 0.
absl::StatusOr<bool> EvaluateAudit(const TradeoffFunction& f,
                                   const AuditOutcome& outcome, double gamma);

// EvaluateAudit on g(s) = f(min(1, s + tau)), which accounts for a proxy
// distribution within total variation tau of the real one.
absl::StatusOr<bool> AuditWithShift(const TradeoffFunction& f, double tau,
                                    const AuditOutcome& outcome, double gamma);

struct EmpiricalEpsilon {
  double epsilon = 0;
  // Largest mu of the family that the audit rejected (the strongest privacy
  // claim refuted by the evidence). Equals mu_min when nothing is rejected.
  double mu = 0;
  // Every mu in the family range was rejected; epsilon is then the value at
  // mu_max and only a lower bound of what a wider range would report.
  bool saturated = false;
};

// Searches the Gaussian family for the boundary between rejected and accepted
// curves and converts the boundary curve to epsilon at `delta`.
absl::StatusOr<EmpiricalEpsilon> ComputeEmpiricalEpsilon(
    const AuditOutcome& outcome, double gamma, double delta, double tau,
    const GaussianFamily& family);

struct GuessSweepResult {
  double epsilon = 0;
  double best_fraction = 0;
  AuditOutcome outcome;
  EmpiricalEpsilon detail;
};

// Evaluates every guess fraction on the same scored game and keeps the
// largest epsilon; ties go to the smaller fraction. A fraction that rounds to
// zero guesses contributes epsilon 0.
absl::StatusOr<GuessSweepResult> BestEpsilonOverGuessSweep(
    const ScoredGame& scored, std::span<const double> fractions, double gamma,
    double delta, double tau, const GaussianFamily& family);

}  // namespace obsaudit

#endif  // OBSAUDIT_AUDIT_H_
