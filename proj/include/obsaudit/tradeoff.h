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

#ifndef OBSAUDIT_TRADEOFF_H_
#define OBSAUDIT_TRADEOFF_H_

#include <memory>
#include <string>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace obsaudit {

// An f-DP trade-off curve f: [0,1] -> [0,1], where f(x) is the smallest
// type-II error of any test at type-I error x. Immutable; copies share the
// base of a shifted curve.
//
// Three kinds are supported:
//   EpsDelta(eps, delta)  max(0, 1 - delta - e^eps x, e^-eps (1 - delta - x))
//   Gaussian(mu)          Phi(Phi^-1(1 - x) - mu)
//   Shifted(base, tau)    base(min(1, x + tau))
//
// Shifted curves are monotone and bounded but need not satisfy
// f(x) <= 1 - x nor convexity; they only feed the audit recursion.
class TradeoffFunction {
 public:
  enum class Kind { kEpsDelta, kGaussian, kShifted };

  static absl::StatusOr<TradeoffFunction> EpsDelta(double eps, double delta);
  static absl::StatusOr<TradeoffFunction> Gaussian(double mu);
  // f(x) = 1 - x.
  static TradeoffFunction PerfectPrivacy();

  Kind kind() const;

  // f(x). x is clamped into [0, 1].
  double Eval(double x) const;
  double operator()(double x) const { return Eval(x); }

  // 1 - f(x), evaluated without cancellation for x near 0.
  double Complement(double x) const;

  // sup{x in [0,1] : 1 - f(x) <= r}, in closed form for every kind. x = 0 is
  // always admissible (f(0) = 1 by convention), so the result is 0 when no
  // positive x qualifies.
  double FbarInverse(double r) const;

  // Parameter accessors; only meaningful for the matching kind.
  double epsilon() const;
  double delta() const;
  double mu() const;
  double tau() const;
  const TradeoffFunction& base() const;

  std::string DebugString() const;

 private:
  struct EpsDeltaCurve {
    double eps;
    double delta;
  };
  struct GaussianCurve {
    double mu;
  };
  struct ShiftedCurve {
    std::shared_ptr<const TradeoffFunction> base;
    double tau;
  };
  using Repr = std::variant<EpsDeltaCurve, GaussianCurve, ShiftedCurve>;

  explicit TradeoffFunction(Repr repr) : repr_(std::move(repr)) {}

  friend absl::StatusOr<TradeoffFunction> ShiftTradeoff(
      const TradeoffFunction& f, double tau);

  Repr repr_;
};

// Range-checked point evaluations.
absl::StatusOr<double> EvalEpsDelta(double eps, double delta, double x);
absl::StatusOr<double> EvalGaussian(double mu, double x);

// g(s) = f(min(1, s + tau)).
absl::StatusOr<TradeoffFunction> ShiftTradeoff(const TradeoffFunction& f,
                                               double tau);

// Range-checked wrapper around TradeoffFunction::FbarInverse.
absl::StatusOr<double> FbarInverse(const TradeoffFunction& f, double r);

// Same quantity by bisection on x -> 1 - f(x) (absolute tolerance 1e-12, at
// most 100 halvings). Independent of the closed forms; used to cross-check
// them.
double FbarInverseByBisection(const TradeoffFunction& f, double r);

// max(0, sup_{x in (0,1]} log((1 - f(x) - delta) / x)): the epsilon that the
// curve guarantees at the given delta. Dense log-spaced grid on
// [1e-300, 1] followed by golden-section refinement around the best point.
absl::StatusOr<double> EpsFromTradeoff(const TradeoffFunction& f,
                                       double delta);

// The Gaussian-DP family searched by the empirical-epsilon audit. Smaller mu
// is stronger privacy and gives a pointwise larger curve.
struct GaussianFamily {
  double mu_min = 1e-4;
  double mu_max = 20.0;
  // Width of the final bisection bracket in mu.
  double tolerance = 1e-3;

  absl::Status Validate() const;
};

}  // namespace obsaudit

#endif  // OBSAUDIT_TRADEOFF_H_
