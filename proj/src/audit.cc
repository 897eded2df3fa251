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

#include "obsaudit/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "obsaudit/status_macros.h"

namespace obsaudit {
namespace {

absl::Status ValidateGamma(double gamma) {
  if (!(gamma > 0 && gamma < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must lie in (0, 1), got ", gamma));
  }
  return absl::OkStatus();
}

// Returns r[0] + h[0]. Records the arrays when `state` is non-null.
double RunRecursion(const TradeoffFunction& f, const AuditOutcome& outcome,
                    double gamma, AuditRecursionState* state) {
  const double m = static_cast<double>(outcome.m);
  const int64_t c = outcome.c;
  const double c_prime = static_cast<double>(outcome.c_prime);

  double r_next = gamma * static_cast<double>(c) / m;
  double h_next = gamma * (c_prime - static_cast<double>(c)) / m;
  if (state != nullptr) {
    state->r.assign(c + 1, 0.0);
    state->h.assign(c + 1, 0.0);
    state->r[c] = r_next;
    state->h[c] = h_next;
  }
  for (int64_t i = c - 1; i >= 0; --i) {
    const double h_i = std::clamp(f.FbarInverse(r_next), 0.0, 1.0);
    const double weight =
        static_cast<double>(i) / (c_prime - static_cast<double>(i));
    const double r_i = r_next + weight * (h_i - h_next);
    if (state != nullptr) {
      state->r[i] = r_i;
      state->h[i] = h_i;
    }
    r_next = r_i;
    h_next = h_i;
  }
  return r_next + h_next;
}

}  // namespace

absl::Status AuditOutcome::Validate() const {
  if (m < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("AuditOutcome: m must be >= 1, got ", m));
  }
  if (!(0 <= c && c <= c_prime && c_prime <= m)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "AuditOutcome: need 0 <= c <= c' <= m, got c=%d c'=%d m=%d", c,
        c_prime, m));
  }
  return absl::OkStatus();
}

absl::StatusOr<AuditRecursionState> RunAuditRecursion(
    const TradeoffFunction& f, const AuditOutcome& outcome, double gamma) {
  OBSAUDIT_RETURN_IF_ERROR(outcome.Validate());
  OBSAUDIT_RETURN_IF_ERROR(ValidateGamma(gamma));
  if (outcome.c_prime == 0) {
    return absl::InvalidArgumentError(
        "RunAuditRecursion: needs at least one guess");
  }
  AuditRecursionState state;
  RunRecursion(f, outcome, gamma, &state);
  return state;
}

absl::StatusOr<bool> EvaluateAudit(const TradeoffFunction& f,
                                   const AuditOutcome& outcome, double gamma) {
  OBSAUDIT_RETURN_IF_ERROR(outcome.Validate());
  OBSAUDIT_RETURN_IF_ERROR(ValidateGamma(gamma));
  if (outcome.c_prime == 0) return true;
  const double total = RunRecursion(f, outcome, gamma, nullptr);
  return total < static_cast<double>(outcome.c_prime) /
                     static_cast<double>(outcome.m);
}

absl::StatusOr<bool> AuditWithShift(const TradeoffFunction& f, double tau,
                                    const AuditOutcome& outcome, double gamma) {
  if (tau == 0) return EvaluateAudit(f, outcome, gamma);
  OBSAUDIT_ASSIGN_OR_RETURN(TradeoffFunction g, ShiftTradeoff(f, tau));
  return EvaluateAudit(g, outcome, gamma);
}

absl::StatusOr<EmpiricalEpsilon> ComputeEmpiricalEpsilon(
    const AuditOutcome& outcome, double gamma, double delta, double tau,
    const GaussianFamily& family) {
  OBSAUDIT_RETURN_IF_ERROR(outcome.Validate());
  OBSAUDIT_RETURN_IF_ERROR(ValidateGamma(gamma));
  OBSAUDIT_RETURN_IF_ERROR(family.Validate());
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1), got ", delta));
  }
  if (!(tau >= 0 && tau <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tau must lie in [0, 1], got ", tau));
  }

  auto accepted = [&](double mu) -> absl::StatusOr<bool> {
    OBSAUDIT_ASSIGN_OR_RETURN(TradeoffFunction f,
                              TradeoffFunction::Gaussian(mu));
    return AuditWithShift(f, tau, outcome, gamma);
  };

  EmpiricalEpsilon result;
  result.mu = family.mu_min;
  if (outcome.c_prime == 0) return result;

  OBSAUDIT_ASSIGN_OR_RETURN(const bool low_accepted, accepted(family.mu_min));
  OBSAUDIT_ASSIGN_OR_RETURN(const bool high_accepted, accepted(family.mu_max));
  if (low_accepted && !high_accepted) {
    return absl::InternalError(absl::StrFormat(
        "ComputeEmpiricalEpsilon: mu=%g accepted but weaker mu=%g rejected; "
        "the audit is not monotone in the family",
        family.mu_min, family.mu_max));
  }
  if (low_accepted) return result;

  if (!high_accepted) {
    OBSAUDIT_ASSIGN_OR_RETURN(TradeoffFunction f,
                              TradeoffFunction::Gaussian(family.mu_max));
    OBSAUDIT_ASSIGN_OR_RETURN(result.epsilon, EpsFromTradeoff(f, delta));
    result.mu = family.mu_max;
    result.saturated = true;
    return result;
  }

  // Invariant: lo rejected, hi accepted.
  double lo = family.mu_min;
  double hi = family.mu_max;
  for (int i = 0; i < 40 && hi - lo > family.tolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    OBSAUDIT_ASSIGN_OR_RETURN(const bool mid_accepted, accepted(mid));
    if (mid_accepted) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  OBSAUDIT_ASSIGN_OR_RETURN(TradeoffFunction boundary,
                            TradeoffFunction::Gaussian(lo));
  OBSAUDIT_ASSIGN_OR_RETURN(result.epsilon, EpsFromTradeoff(boundary, delta));
  result.mu = lo;
  return result;
}

absl::StatusOr<GuessSweepResult> BestEpsilonOverGuessSweep(
    const ScoredGame& scored, std::span<const double> fractions, double gamma,
    double delta, double tau, const GaussianFamily& family) {
  if (fractions.empty()) {
    return absl::InvalidArgumentError(
        "BestEpsilonOverGuessSweep: empty fraction list");
  }
  if (scored.artifacts == nullptr ||
      scored.artifacts->size() != static_cast<int64_t>(scored.scores.size())) {
    return absl::InvalidArgumentError(
        "BestEpsilonOverGuessSweep: scores must be attached to artifacts "
        "covering every sample");
  }
  for (double fraction : fractions) {
    if (!(fraction > 0 && fraction <= 1)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "BestEpsilonOverGuessSweep: fraction must lie in (0, 1], got ",
          fraction));
    }
  }
  const int64_t m = static_cast<int64_t>(scored.scores.size());
  if (m == 0) {
    return absl::InvalidArgumentError("BestEpsilonOverGuessSweep: no samples");
  }

  // Number of correct guesses among the j most confident samples.
  const std::vector<int64_t> order = RankByConfidence(scored.scores);
  std::vector<int64_t> correct_prefix(m + 1, 0);
  for (int64_t j = 0; j < m; ++j) {
    const int64_t i = order[j];
    const int guess = scored.scores[i] > 0 ? 0 : 1;
    correct_prefix[j + 1] =
        correct_prefix[j] + (guess == scored.artifacts->b[i] ? 1 : 0);
  }

  GuessSweepResult best;
  best.epsilon = -1;
  for (double fraction : fractions) {
    const int64_t c_prime = GuessCount(fraction, m);
    GuessSweepResult candidate;
    candidate.best_fraction = fraction;
    candidate.outcome = AuditOutcome{m, c_prime, correct_prefix[c_prime]};
    if (c_prime > 0) {
      OBSAUDIT_ASSIGN_OR_RETURN(
          candidate.detail, ComputeEmpiricalEpsilon(candidate.outcome, gamma,
                                                    delta, tau, family));
      candidate.epsilon = candidate.detail.epsilon;
    } else {
      candidate.detail.mu = family.mu_min;
    }
    const bool better =
        candidate.epsilon > best.epsilon ||
        (candidate.epsilon == best.epsilon &&
         candidate.best_fraction < best.best_fraction);
    if (better) best = candidate;
  }
  return best;
}

}  // namespace obsaudit
