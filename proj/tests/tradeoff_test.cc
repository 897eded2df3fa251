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

#include "obsaudit/tradeoff.h"

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "obsaudit/normal.h"

namespace obsaudit {
namespace {

using ::testing::DoubleNear;

TradeoffFunction EpsDeltaOrDie(double eps, double delta) {
  absl::StatusOr<TradeoffFunction> f = TradeoffFunction::EpsDelta(eps, delta);
  EXPECT_TRUE(f.ok()) << f.status();
  return *f;
}

TradeoffFunction GaussianOrDie(double mu) {
  absl::StatusOr<TradeoffFunction> f = TradeoffFunction::Gaussian(mu);
  EXPECT_TRUE(f.ok()) << f.status();
  return *f;
}

TradeoffFunction ShiftOrDie(const TradeoffFunction& f, double tau) {
  absl::StatusOr<TradeoffFunction> g = ShiftTradeoff(f, tau);
  EXPECT_TRUE(g.ok()) << g.status();
  return *g;
}

std::vector<TradeoffFunction> ValidCurves() {
  std::vector<TradeoffFunction> curves;
  for (double eps : {0.0, 0.1, 0.7, 1.0, 2.0, 4.0, 8.0}) {
    for (double delta : {0.0, 1e-5, 0.05, 0.5}) {
      curves.push_back(EpsDeltaOrDie(eps, delta));
    }
  }
  for (double mu : {0.0, 1e-4, 0.3, 1.0, 2.5, 6.0, 20.0}) {
    curves.push_back(GaussianOrDie(mu));
  }
  return curves;
}

std::vector<double> UniformGrid(int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    grid.push_back(static_cast<double>(i) / (points - 1));
  }
  return grid;
}

// delta(eps) of mu-GDP in closed form (the Gaussian privacy profile).
double GaussianProfile(double mu, double eps) {
  return NormalCdf(-eps / mu + mu / 2) -
         std::exp(eps) * NormalCdf(-eps / mu - mu / 2);
}

// Inverts the closed-form profile by bisection: the eps at which mu-GDP
// reaches `delta`.
double GaussianEpsilonOracle(double mu, double delta) {
  if (GaussianProfile(mu, 0) <= delta) return 0;
  double lo = 0, hi = 500;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (GaussianProfile(mu, mid) > delta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(EvalEpsDeltaTest, PerfectPrivacyIsOneMinusX) {
  EXPECT_THAT(*EvalEpsDelta(0, 0, 0.3), DoubleNear(0.7, 1e-15));
}

TEST(EvalEpsDeltaTest, HandEvaluatedPoint) {
  // max(0, 1 - 2 * 0.25, 0.5 * 0.75) = max(0, 0.5, 0.375).
  EXPECT_THAT(*EvalEpsDelta(std::log(2.0), 0, 0.25), DoubleNear(0.5, 1e-15));
}

TEST(EvalEpsDeltaTest, DeltaOneCollapsesToZero) {
  EXPECT_EQ(*EvalEpsDelta(0, 1, 0.5), 0.0);
}

TEST(EvalEpsDeltaTest, RejectsOutOfRangeInputs) {
  EXPECT_EQ(EvalEpsDelta(-0.1, 0, 0.5).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(EvalEpsDelta(1, 1.5, 0.5).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(EvalEpsDelta(1, 0, 1.01).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(EvalEpsDelta(1, 0, std::nan("")).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(TradeoffFunction::EpsDelta(INFINITY, 0).ok());
}

TEST(EvalGaussianTest, ZeroMuIsPerfectPrivacy) {
  EXPECT_THAT(*EvalGaussian(0, 0.42), DoubleNear(0.58, 1e-12));
}

TEST(EvalGaussianTest, HighPrecisionReferenceAtOneHalf) {
  // Phi(-1.5) to 20 digits from an arbitrary-precision evaluation.
  EXPECT_THAT(*EvalGaussian(1.5, 0.5),
              DoubleNear(0.066807201268858066004, 1e-15));
}

TEST(EvalGaussianTest, BoundaryConvention) {
  EXPECT_EQ(*EvalGaussian(2, 0), 1.0);
  EXPECT_EQ(*EvalGaussian(2, 1), 0.0);
}

TEST(EvalGaussianTest, RejectsOutOfRangeInputs) {
  EXPECT_FALSE(EvalGaussian(-1, 0.5).ok());
  EXPECT_FALSE(EvalGaussian(1, -0.5).ok());
}

TEST(ShiftTradeoffTest, ZeroShiftIsIdentity) {
  for (const TradeoffFunction& f : ValidCurves()) {
    const TradeoffFunction g = ShiftOrDie(f, 0);
    for (double x : UniformGrid(1000)) {
      ASSERT_EQ(g(x), f(x)) << f.DebugString() << " x=" << x;
    }
  }
}

TEST(ShiftTradeoffTest, HandEvaluatedPoint) {
  const TradeoffFunction g = ShiftOrDie(TradeoffFunction::PerfectPrivacy(), 0.1);
  EXPECT_THAT(g(0.2), DoubleNear(0.7, 1e-15));
  EXPECT_EQ(g.kind(), TradeoffFunction::Kind::kShifted);
  EXPECT_EQ(g.tau(), 0.1);
}

TEST(ShiftTradeoffTest, FullShiftIsConstantAtFOfOne) {
  for (const TradeoffFunction& f : ValidCurves()) {
    const TradeoffFunction g = ShiftOrDie(f, 1);
    for (double s : {0.0, 0.3, 1.0}) EXPECT_EQ(g(s), f(1.0));
  }
}

TEST(ShiftTradeoffTest, RejectsTauOutsideUnitInterval) {
  EXPECT_FALSE(ShiftTradeoff(GaussianOrDie(1), -0.01).ok());
  EXPECT_FALSE(ShiftTradeoff(GaussianOrDie(1), 1.01).ok());
}

TEST(ShiftTradeoffTest, LargerShiftIsPointwiseLower) {
  const std::vector<double> taus = {0, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 1};
  for (const TradeoffFunction& f : ValidCurves()) {
    for (size_t i = 1; i < taus.size(); ++i) {
      const TradeoffFunction lo = ShiftOrDie(f, taus[i - 1]);
      const TradeoffFunction hi = ShiftOrDie(f, taus[i]);
      for (double s : UniformGrid(200)) {
        ASSERT_GE(lo(s), hi(s)) << f.DebugString() << " s=" << s;
      }
    }
  }
}

TEST(TradeoffValidityTest, GridInvariants) {
  for (const TradeoffFunction& f : ValidCurves()) {
    double previous = 1.0;
    for (double x : UniformGrid(1000)) {
      const double y = f(x);
      ASSERT_GE(y, 0.0) << f.DebugString() << " x=" << x;
      ASSERT_LE(y, 1.0) << f.DebugString() << " x=" << x;
      ASSERT_LE(y, 1 - x + 1e-12) << f.DebugString() << " x=" << x;
      ASSERT_LE(y, previous + 1e-12) << f.DebugString() << " x=" << x;
      previous = y;
    }
  }
}

TEST(TradeoffValidityTest, ShiftedCurvesStayInRangeAndMonotone) {
  for (const TradeoffFunction& f : ValidCurves()) {
    for (double tau : {1e-3, 0.2}) {
      const TradeoffFunction g = ShiftOrDie(f, tau);
      double previous = 1.0;
      for (double x : UniformGrid(1000)) {
        const double y = g(x);
        ASSERT_GE(y, 0.0);
        ASSERT_LE(y, previous + 1e-12) << g.DebugString() << " x=" << x;
        previous = y;
      }
    }
  }
}

TEST(TradeoffValidityTest, ComplementMatchesOneMinusEval) {
  for (const TradeoffFunction& f : ValidCurves()) {
    for (double x : UniformGrid(101)) {
      ASSERT_NEAR(f.Complement(x), 1 - f(x), 1e-12) << f.DebugString();
    }
  }
}

TEST(GaussianFamilyTest, SmallerMuIsPointwiseStronger) {
  const std::vector<double> mus = {0, 0.01, 0.5, 1, 2, 5, 20};
  for (size_t i = 1; i < mus.size(); ++i) {
    for (double x : UniformGrid(500)) {
      ASSERT_GE(*EvalGaussian(mus[i - 1], x), *EvalGaussian(mus[i], x) - 1e-12)
          << "mu=" << mus[i] << " x=" << x;
    }
  }
}

TEST(FbarInverseTest, IdentityForPerfectPrivacy) {
  EXPECT_THAT(*FbarInverse(TradeoffFunction::PerfectPrivacy(), 0.37),
              DoubleNear(0.37, 1e-15));
}

TEST(FbarInverseTest, HandSolvedEpsDeltaPoint) {
  EXPECT_THAT(*FbarInverse(EpsDeltaOrDie(std::log(2.0), 0), 0.5),
              DoubleNear(0.25, 1e-15));
}

TEST(FbarInverseTest, ZeroCurveAdmitsOnlyTheOrigin) {
  // delta = 1 gives f = 0, so 1 - f(x) = 1 > 0.99 for every x > 0.
  EXPECT_EQ(*FbarInverse(EpsDeltaOrDie(0, 1), 0.99), 0.0);
  EXPECT_EQ(FbarInverseByBisection(EpsDeltaOrDie(0, 1), 0.99), 0.0);
}

TEST(FbarInverseTest, RejectsOutOfRange) {
  EXPECT_FALSE(FbarInverse(GaussianOrDie(1), 1.5).ok());
  EXPECT_FALSE(FbarInverse(GaussianOrDie(1), -0.5).ok());
}

TEST(FbarInverseTest, ClosedFormAgreesWithBisection) {
  std::vector<TradeoffFunction> curves = ValidCurves();
  const size_t base_count = curves.size();
  for (size_t i = 0; i < base_count; ++i) {
    for (double tau : {1e-6, 1e-2, 0.3}) {
      curves.push_back(ShiftOrDie(curves[i], tau));
    }
  }
  for (const TradeoffFunction& f : curves) {
    for (double r : UniformGrid(257)) {
      ASSERT_NEAR(f.FbarInverse(r), FbarInverseByBisection(f, r), 1e-9)
          << f.DebugString() << " r=" << r;
    }
  }
}

TEST(FbarInverseTest, InverseIsConsistentAndMonotone) {
  for (const TradeoffFunction& f : ValidCurves()) {
    double previous = 0;
    for (double r : UniformGrid(500)) {
      const double x = f.FbarInverse(r);
      // x = 0 is admissible by convention even when 1 - f(0) = delta > r.
      if (x > 0) {
        ASSERT_LE(f.Complement(x), r + 1e-9) << f.DebugString() << " r=" << r;
      }
      ASSERT_GE(x, previous) << f.DebugString() << " r=" << r;
      previous = x;
    }
  }
}

TEST(FbarInverseTest, GaussianSmallTargets) {
  // The recursion feeds targets of order gamma/m; the closed form must keep
  // relative accuracy there. Oracle: Phi(Phi^-1(r) - mu) evaluated directly.
  for (double mu : {0.5, 1.0, 3.0}) {
    const TradeoffFunction f = GaussianOrDie(mu);
    for (double r : {1e-8, 5e-8, 1e-6, 1e-4}) {
      const double x = f.FbarInverse(r);
      EXPECT_NEAR(f.Complement(x) / r, 1.0, 1e-9) << "mu=" << mu << " r=" << r;
    }
  }
}

TEST(EpsFromTradeoffTest, PerfectPrivacyGivesZero) {
  EXPECT_NEAR(*EpsFromTradeoff(TradeoffFunction::PerfectPrivacy(), 0), 0.0,
              1e-12);
  EXPECT_EQ(*EpsFromTradeoff(GaussianOrDie(0), 1e-5), 0.0);
}

TEST(EpsFromTradeoffTest, EpsDeltaRoundTrip) {
  for (double eps : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    EXPECT_NEAR(*EpsFromTradeoff(EpsDeltaOrDie(eps, 0), 0), eps, 1e-3);
    EXPECT_NEAR(*EpsFromTradeoff(EpsDeltaOrDie(eps, 1e-5), 1e-5), eps, 1e-3);
  }
}

TEST(EpsFromTradeoffTest, GaussianMatchesClosedFormProfile) {
  for (double mu : {0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 20.0}) {
    for (double delta : {1e-10, 1e-5, 1e-3, 0.05}) {
      const double expected = GaussianEpsilonOracle(mu, delta);
      EXPECT_NEAR(*EpsFromTradeoff(GaussianOrDie(mu), delta), expected, 1e-3)
          << "mu=" << mu << " delta=" << delta;
    }
  }
}

TEST(EpsFromTradeoffTest, IncreasingInMu) {
  double previous = 0;
  for (double mu = 0.05; mu <= 20; mu *= 1.3) {
    const double eps = *EpsFromTradeoff(GaussianOrDie(mu), 1e-5);
    EXPECT_GE(eps, previous) << "mu=" << mu;
    previous = eps;
  }
}

TEST(EpsFromTradeoffTest, RejectsDeltaOutsideRange) {
  EXPECT_FALSE(EpsFromTradeoff(GaussianOrDie(1), 1.0).ok());
  EXPECT_FALSE(EpsFromTradeoff(GaussianOrDie(1), -1e-9).ok());
}

TEST(GaussianFamilyTest, ValidateChecksRange) {
  EXPECT_TRUE(GaussianFamily{}.Validate().ok());
  EXPECT_FALSE((GaussianFamily{0.0, 20.0, 1e-3}).Validate().ok());
  EXPECT_FALSE((GaussianFamily{2.0, 1.0, 1e-3}).Validate().ok());
  EXPECT_FALSE((GaussianFamily{1e-4, 20.0, 0.0}).Validate().ok());
}

}  // namespace
}  // namespace obsaudit
