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

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "obsaudit/game.h"
#include "obsaudit/tradeoff.h"

namespace obsaudit {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

TradeoffFunction Gaussian(double mu) {
  return *TradeoffFunction::Gaussian(mu);
}

// Straightforward restatement of the decision recursion on top of the
// bisection inverse, written independently of the library's loop.
bool ReferenceAccepts(const TradeoffFunction& f, int64_t m, int64_t c_prime,
                      int64_t c, double gamma) {
  if (c_prime == 0) return true;
  std::vector<double> r(c + 1), h(c + 1);
  r[c] = gamma * c / m;
  h[c] = gamma * (c_prime - c) / m;
  for (int64_t i = c - 1; i >= 0; --i) {
    h[i] = FbarInverseByBisection(f, r[i + 1]);
    r[i] = r[i + 1] + (double(i) / double(c_prime - i)) * (h[i] - h[i + 1]);
  }
  return r[0] + h[0] < double(c_prime) / double(m);
}

TEST(EvaluateAuditTest, NoCorrectGuessesIsAccepted) {
  EXPECT_TRUE(*EvaluateAudit(Gaussian(1.0), {1000, 100, 0}, 0.05));
  EXPECT_TRUE(*EvaluateAudit(*TradeoffFunction::EpsDelta(3, 0), {1000, 100, 0},
                             0.05));
}

TEST(EvaluateAuditTest, TwoOfTwoUnderPerfectPrivacyIsAccepted) {
  EXPECT_TRUE(
      *EvaluateAudit(TradeoffFunction::PerfectPrivacy(), {2, 2, 2}, 0.05));
}

TEST(EvaluateAuditTest, FiveOfFiveUnderPerfectPrivacyIsRejected) {
  EXPECT_FALSE(
      *EvaluateAudit(TradeoffFunction::PerfectPrivacy(), {5, 5, 5}, 0.05));
}

TEST(EvaluateAuditTest, NoGuessesIsAccepted) {
  EXPECT_TRUE(*EvaluateAudit(Gaussian(5.0), {10, 0, 0}, 0.05));
}

TEST(RunAuditRecursionTest, HandTraceTwoOfTwo) {
  const AuditRecursionState state = *RunAuditRecursion(
      TradeoffFunction::PerfectPrivacy(), {2, 2, 2}, 0.05);
  EXPECT_THAT(state.r, Pointwise(DoubleNear(1e-15), {0.10, 0.10, 0.05}));
  EXPECT_THAT(state.h, Pointwise(DoubleNear(1e-15), {0.10, 0.05, 0.0}));
}

TEST(RunAuditRecursionTest, HandTraceFiveOfFive) {
  // With fbar^-1 the identity: h[i] = r[i+1] and
  // r[i] = r[i+1] + i / (5 - i) (h[i] - h[i+1]).
  const AuditRecursionState state = *RunAuditRecursion(
      TradeoffFunction::PerfectPrivacy(), {5, 5, 5}, 0.05);
  EXPECT_THAT(state.r, Pointwise(DoubleNear(1e-14),
                                 {0.80, 0.80, 0.75, 0.55, 0.25, 0.05}));
  EXPECT_THAT(state.h, Pointwise(DoubleNear(1e-14),
                                 {0.80, 0.75, 0.55, 0.25, 0.05, 0.0}));
  EXPECT_GE(state.r[0] + state.h[0], 1.0);
}

TEST(RunAuditRecursionTest, RequiresAGuess) {
  EXPECT_FALSE(RunAuditRecursion(Gaussian(1), {10, 0, 0}, 0.05).ok());
}

TEST(EvaluateAuditTest, RejectsInvalidInputs) {
  EXPECT_EQ(EvaluateAudit(Gaussian(1), {10, 5, 6}, 0.05).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(EvaluateAudit(Gaussian(1), {10, 11, 6}, 0.05).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(EvaluateAudit(Gaussian(1), {0, 0, 0}, 0.05).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(EvaluateAudit(Gaussian(1), {10, 5, 3}, 0.0).ok());
  EXPECT_FALSE(EvaluateAudit(Gaussian(1), {10, 5, 3}, 1.0).ok());
}

TEST(EvaluateAuditTest, AgreesWithReferenceOnRandomGrid) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int64_t m = std::uniform_int_distribution<int64_t>(1, 5000)(rng);
    const int64_t c_prime = std::uniform_int_distribution<int64_t>(0, std::min<int64_t>(m, 300))(rng);
    const int64_t c = std::uniform_int_distribution<int64_t>(0, c_prime)(rng);
    const double mu = std::uniform_real_distribution<double>(0.01, 4)(rng);
    const TradeoffFunction f = Gaussian(mu);
    EXPECT_EQ(*EvaluateAudit(f, {m, c_prime, c}, 0.05),
              ReferenceAccepts(f, m, c_prime, c, 0.05))
        << "m=" << m << " c'=" << c_prime << " c=" << c << " mu=" << mu;
  }
}

TEST(EvaluateAuditTest, RejectionIsMonotoneInEvidence) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int64_t m = std::uniform_int_distribution<int64_t>(50, 100000)(rng);
    const int64_t c_prime = std::uniform_int_distribution<int64_t>(1, std::min<int64_t>(m, 400))(rng);
    const double mu = std::uniform_real_distribution<double>(0.05, 3)(rng);
    const TradeoffFunction f = Gaussian(mu);
    bool rejected = false;
    for (int64_t c = 0; c <= c_prime; ++c) {
      const bool accepted = *EvaluateAudit(f, {m, c_prime, c}, 0.05);
      if (rejected) {
        ASSERT_FALSE(accepted) << "m=" << m << " c'=" << c_prime << " c=" << c
                               << " mu=" << mu;
      }
      rejected = !accepted;
    }
  }
}

TEST(EvaluateAuditTest, RejectionIsMonotoneInPrivacyStrength) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const int64_t m = std::uniform_int_distribution<int64_t>(100, 1000000)(rng);
    const int64_t c_prime = std::uniform_int_distribution<int64_t>(1, std::min<int64_t>(m, 500))(rng);
    const int64_t c = std::uniform_int_distribution<int64_t>(0, c_prime)(rng);
    // Walk from weak (large mu) to strong claims; once one is rejected every
    // stronger one must be as well.
    bool rejected = false;
    for (double mu = 6.0; mu > 0.01; mu *= 0.8) {
      const bool accepted = *EvaluateAudit(Gaussian(mu), {m, c_prime, c}, 0.05);
      if (rejected) ASSERT_FALSE(accepted) << "mu=" << mu;
      rejected = !accepted;
    }
  }
}

TEST(AuditWithShiftTest, ZeroShiftDelegates) {
  for (int64_t c : {0, 50, 80, 100}) {
    EXPECT_EQ(*AuditWithShift(Gaussian(0.8), 0, {10000, 100, c}, 0.05),
              *EvaluateAudit(Gaussian(0.8), {10000, 100, c}, 0.05));
  }
}

TEST(AuditWithShiftTest, FullShiftNeverRejects) {
  // g is identically f(1) = 0, so fbar^-1 collapses to 0 and the threshold
  // c'/m = 0.5 cannot be reached.
  const AuditOutcome outcome{1000000, 500000, 500000};
  EXPECT_TRUE(*AuditWithShift(*TradeoffFunction::EpsDelta(1, 0), 1.0, outcome,
                              0.05));
  EXPECT_TRUE(*AuditWithShift(Gaussian(1), 1.0, outcome, 0.05));
}

TEST(AuditWithShiftTest, TinyShiftMatchesUnshiftedDecision) {
  const AuditOutcome outcome{1000000, 1000, 900};
  EXPECT_EQ(*AuditWithShift(Gaussian(0.5), 1e-6, outcome, 0.05),
            *AuditWithShift(Gaussian(0.5), 0, outcome, 0.05));
}

TEST(AuditWithShiftTest, MatchesExplicitlyShiftedCurve) {
  const TradeoffFunction f = Gaussian(1.2);
  for (double tau : {1e-4, 1e-2, 0.2}) {
    const TradeoffFunction g = *ShiftTradeoff(f, tau);
    for (int64_t c : {10, 60, 90}) {
      EXPECT_EQ(*AuditWithShift(f, tau, {5000, 100, c}, 0.05),
                ReferenceAccepts(g, 5000, 100, c, 0.05))
          << "tau=" << tau << " c=" << c;
    }
  }
}

// The family boundary by exhaustive scan: the largest mu on a 1e-3 grid that
// the audit rejects, or nullopt if none is.
std::optional<double> LargestRejectedOnGrid(const AuditOutcome& outcome,
                                            double tau, double mu_max) {
  std::optional<double> largest;
  for (int j = 0;; ++j) {
    const double mu = 1e-4 + 1e-3 * j;
    if (mu > mu_max) break;
    if (!*AuditWithShift(Gaussian(mu), tau, outcome, 0.05)) largest = mu;
  }
  return largest;
}

TEST(ComputeEmpiricalEpsilonTest, NothingRejectedGivesZero) {
  const EmpiricalEpsilon result = *ComputeEmpiricalEpsilon(
      {1000000, 100, 0}, 0.05, 1e-5, 0, GaussianFamily{});
  EXPECT_EQ(result.epsilon, 0.0);
  EXPECT_FALSE(result.saturated);
}

TEST(ComputeEmpiricalEpsilonTest, NoGuessesGivesZero) {
  EXPECT_EQ(ComputeEmpiricalEpsilon({100, 0, 0}, 0.05, 1e-5, 0,
                                    GaussianFamily{})
                ->epsilon,
            0.0);
}

TEST(ComputeEmpiricalEpsilonTest, PerfectGuessesMatchGridScan) {
  const AuditOutcome outcome{1000000, 1000, 1000};
  const EmpiricalEpsilon result =
      *ComputeEmpiricalEpsilon(outcome, 0.05, 1e-5, 0, GaussianFamily{});
  EXPECT_GT(result.epsilon, 0.0);
  const std::optional<double> grid = LargestRejectedOnGrid(outcome, 0, 4.0);
  ASSERT_TRUE(grid.has_value());
  EXPECT_NEAR(result.mu, *grid, 1e-3);
  EXPECT_NEAR(result.epsilon, *EpsFromTradeoff(Gaussian(*grid), 1e-5),
              *EpsFromTradeoff(Gaussian(*grid + 1e-3), 1e-5) -
                  *EpsFromTradeoff(Gaussian(*grid), 1e-5) + 1e-9);
}

TEST(ComputeEmpiricalEpsilonTest, BisectionMatchesGridScanOnRandomOutcomes) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int64_t c_prime = std::uniform_int_distribution<int64_t>(20, 300)(rng);
    const int64_t c = std::uniform_int_distribution<int64_t>(c_prime / 2, c_prime)(rng);
    const AuditOutcome outcome{100000, c_prime, c};
    const EmpiricalEpsilon result =
        *ComputeEmpiricalEpsilon(outcome, 0.05, 1e-5, 0, GaussianFamily{});
    const std::optional<double> grid = LargestRejectedOnGrid(outcome, 0, 3.0);
    if (!grid.has_value()) {
      EXPECT_EQ(result.epsilon, 0.0) << "c'=" << c_prime << " c=" << c;
      continue;
    }
    EXPECT_NEAR(result.mu, *grid, 1e-3) << "c'=" << c_prime << " c=" << c;
  }
}

TEST(ComputeEmpiricalEpsilonTest, MoreCorrectGuessesNeverLowerEpsilon) {
  const double at900 = ComputeEmpiricalEpsilon({1000000, 1000, 900}, 0.05,
                                               1e-5, 0, GaussianFamily{})
                           ->epsilon;
  const double at950 = ComputeEmpiricalEpsilon({1000000, 1000, 950}, 0.05,
                                               1e-5, 0, GaussianFamily{})
                           ->epsilon;
  EXPECT_GT(at900, 0.0);
  EXPECT_GE(at950, at900);
}

TEST(ComputeEmpiricalEpsilonTest, NonIncreasingInTau) {
  const AuditOutcome outcome{1000000, 1000, 930};
  double previous = INFINITY;
  for (double tau : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
    const double eps =
        ComputeEmpiricalEpsilon(outcome, 0.05, 1e-5, tau, GaussianFamily{})
            ->epsilon;
    EXPECT_LE(eps, previous) << "tau=" << tau;
    previous = eps;
  }
  EXPECT_EQ(previous, 0.0);
}

TEST(ComputeEmpiricalEpsilonTest, SaturatesWhenWholeRangeIsRejected) {
  GaussianFamily narrow;
  narrow.mu_max = 0.5;
  const EmpiricalEpsilon result =
      *ComputeEmpiricalEpsilon({1000000, 1000, 1000}, 0.05, 1e-5, 0, narrow);
  EXPECT_TRUE(result.saturated);
  EXPECT_EQ(result.mu, 0.5);
  EXPECT_NEAR(result.epsilon, *EpsFromTradeoff(Gaussian(0.5), 1e-5), 1e-12);
}

TEST(ComputeEmpiricalEpsilonTest, RejectsInvalidParameters) {
  EXPECT_FALSE(
      ComputeEmpiricalEpsilon({10, 5, 3}, 0.05, 1.0, 0, GaussianFamily{}).ok());
  EXPECT_FALSE(
      ComputeEmpiricalEpsilon({10, 5, 3}, 0.05, 1e-5, 2, GaussianFamily{}).ok());
  EXPECT_FALSE(ComputeEmpiricalEpsilon({10, 5, 3}, 0.05, 1e-5, 0,
                                       GaussianFamily{1, 0.5, 1e-3})
                   .ok());
}

ScoredGame MakeScoredGame(std::vector<double> scores, std::vector<uint8_t> b) {
  auto artifacts = std::make_shared<GameArtifacts>();
  artifacts->b = std::move(b);
  artifacts->y1.assign(artifacts->b.size(), 0);
  ScoredGame scored;
  scored.scores = std::move(scores);
  scored.shown_labels.assign(scored.scores.size(), 0);
  scored.artifacts = std::move(artifacts);
  return scored;
}

// m samples; the first `strong` are confidently and correctly scored, the
// rest carry weak scores pointing the wrong way half of the time.
ScoredGame SeparatedGame(int64_t m, int64_t strong) {
  std::vector<double> scores(m);
  std::vector<uint8_t> b(m);
  for (int64_t i = 0; i < m; ++i) {
    b[i] = i % 2;
    if (i < strong) {
      scores[i] = b[i] == 0 ? 10.0 : -10.0;
    } else {
      const bool right = (i / 2) % 2 == 0;
      scores[i] = ((b[i] == 0) == right ? 1e-3 : -1e-3) * (1 + 1e-6 * i);
    }
  }
  return MakeScoredGame(std::move(scores), std::move(b));
}

TEST(BestEpsilonOverGuessSweepTest, SingleFractionEqualsDirectComputation) {
  const ScoredGame scored = SeparatedGame(100000, 100);
  const std::vector<double> fractions = {0.001};
  const GuessSweepResult sweep = *BestEpsilonOverGuessSweep(
      scored, fractions, 0.05, 1e-5, 0, GaussianFamily{});
  const GuessVector guesses = *MakeGuesses(scored, 0.001);
  const AuditOutcome outcome = *Tally(guesses, *scored.artifacts);
  EXPECT_EQ(sweep.outcome, outcome);
  EXPECT_EQ(sweep.best_fraction, 0.001);
  EXPECT_EQ(sweep.epsilon, ComputeEmpiricalEpsilon(outcome, 0.05, 1e-5, 0,
                                                   GaussianFamily{})
                               ->epsilon);
}

TEST(BestEpsilonOverGuessSweepTest, PerfectSeparationPrefersFewGuesses) {
  const ScoredGame scored = SeparatedGame(100000, 100);
  const std::vector<double> fractions = {0.001, 0.01, 1.0};
  const GuessSweepResult sweep = *BestEpsilonOverGuessSweep(
      scored, fractions, 0.05, 1e-5, 0, GaussianFamily{});
  EXPECT_EQ(sweep.outcome.c, 100);
  const double all = ComputeEmpiricalEpsilon(
                         *Tally(*MakeGuesses(scored, 1.0), *scored.artifacts),
                         0.05, 1e-5, 0, GaussianFamily{})
                         ->epsilon;
  EXPECT_GE(sweep.epsilon, all);
  EXPECT_EQ(sweep.best_fraction, 0.001);
}

TEST(BestEpsilonOverGuessSweepTest, AllAbstainFractionContributesZero) {
  const ScoredGame scored = SeparatedGame(1000, 0);
  const std::vector<double> fractions = {1e-4};
  const GuessSweepResult sweep = *BestEpsilonOverGuessSweep(
      scored, fractions, 0.05, 1e-5, 0, GaussianFamily{});
  EXPECT_EQ(sweep.epsilon, 0.0);
  EXPECT_EQ(sweep.outcome.c_prime, 0);
}

TEST(BestEpsilonOverGuessSweepTest, TiesGoToTheSmallerFraction) {
  // Coin-flip quality everywhere: every fraction gives epsilon 0.
  const ScoredGame scored = SeparatedGame(1000, 0);
  const std::vector<double> fractions = {0.5, 0.1, 0.2};
  const GuessSweepResult sweep = *BestEpsilonOverGuessSweep(
      scored, fractions, 0.05, 1e-5, 0, GaussianFamily{});
  EXPECT_EQ(sweep.epsilon, 0.0);
  EXPECT_EQ(sweep.best_fraction, 0.1);
}

TEST(BestEpsilonOverGuessSweepTest, RejectsBadInputs) {
  const ScoredGame scored = SeparatedGame(100, 10);
  EXPECT_EQ(BestEpsilonOverGuessSweep(scored, {}, 0.05, 1e-5, 0,
                                      GaussianFamily{})
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  ScoredGame detached = scored;
  detached.artifacts = nullptr;
  const std::vector<double> fractions = {0.1};
  EXPECT_FALSE(BestEpsilonOverGuessSweep(detached, fractions, 0.05, 1e-5, 0,
                                         GaussianFamily{})
                   .ok());
  const std::vector<double> bad = {1.5};
  EXPECT_FALSE(
      BestEpsilonOverGuessSweep(scored, bad, 0.05, 1e-5, 0, GaussianFamily{})
          .ok());
}

}  // namespace
}  // namespace obsaudit
