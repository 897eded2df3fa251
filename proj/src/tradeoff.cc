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

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "obsaudit/normal.h"

namespace obsaudit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

bool InUnitInterval(double x) { return x >= 0 && x <= 1; }

constexpr int kEpsGridPoints = 10001;
// Strong claims (mu near 20) attain their epsilon only around x ~ 1e-130.
constexpr double kEpsGridMinLog10 = -300.0;
constexpr int kGoldenIterations = 100;

}  // namespace

absl::StatusOr<TradeoffFunction> TradeoffFunction::EpsDelta(double eps,
                                                            double delta) {
  if (!(eps >= 0) || std::isinf(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("EpsDelta: eps must be finite and non-negative, got ",
                     eps));
  }
  if (!InUnitInterval(delta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("EpsDelta: delta must lie in [0, 1], got ", delta));
  }
  return TradeoffFunction(EpsDeltaCurve{eps, delta});
}

absl::StatusOr<TradeoffFunction> TradeoffFunction::Gaussian(double mu) {
  if (!(mu >= 0) || std::isinf(mu)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Gaussian: mu must be finite and non-negative, got ", mu));
  }
  return TradeoffFunction(GaussianCurve{mu});
}

TradeoffFunction TradeoffFunction::PerfectPrivacy() {
  return TradeoffFunction(EpsDeltaCurve{0.0, 0.0});
}

TradeoffFunction::Kind TradeoffFunction::kind() const {
  return std::visit(Overloaded{
                        [](const EpsDeltaCurve&) { return Kind::kEpsDelta; },
                        [](const GaussianCurve&) { return Kind::kGaussian; },
                        [](const ShiftedCurve&) { return Kind::kShifted; },
                    },
                    repr_);
}

double TradeoffFunction::Eval(double x) const {
  x = Clamp01(x);
  return std::visit(
      Overloaded{
          [x](const EpsDeltaCurve& c) {
            const double a = 1 - c.delta - std::exp(c.eps) * x;
            const double b = std::exp(-c.eps) * (1 - c.delta - x);
            return Clamp01(std::max({0.0, a, b}));
          },
          [x](const GaussianCurve& c) {
            // Phi(Phi^-1(1 - x) - mu) written with Phi^-1(1 - x) = -Phi^-1(x).
            return NormalCdf(-NormalQuantile(x) - c.mu);
          },
          [x](const ShiftedCurve& c) {
            return c.base->Eval(std::min(1.0, x + c.tau));
          },
      },
      repr_);
}

double TradeoffFunction::Complement(double x) const {
  x = Clamp01(x);
  return std::visit(
      Overloaded{
          [x](const EpsDeltaCurve& c) {
            const double a = c.delta + std::exp(c.eps) * x;
            const double b = 1 - std::exp(-c.eps) * (1 - c.delta - x);
            return Clamp01(std::min({1.0, a, b}));
          },
          [x](const GaussianCurve& c) {
            return NormalCdf(NormalQuantile(x) + c.mu);
          },
          [x](const ShiftedCurve& c) {
            return c.base->Complement(std::min(1.0, x + c.tau));
          },
      },
      repr_);
}

double TradeoffFunction::FbarInverse(double r) const {
  if (r >= 1) return 1.0;
  if (r < 0) return 0.0;
  return std::visit(
      Overloaded{
          [r](const EpsDeltaCurve& c) {
            // 1 - f is the minimum of two increasing lines (and 1); the
            // sublevel set is the union of the two line sublevel sets.
            const double first = (r - c.delta) * std::exp(-c.eps);
            const double second = 1 - c.delta - (1 - r) * std::exp(c.eps);
            return Clamp01(std::max(first, second));
          },
          [r](const GaussianCurve& c) {
            return NormalCdf(NormalQuantile(r) - c.mu);
          },
          [r](const ShiftedCurve& c) {
            if (c.base->Complement(1.0) <= r) return 1.0;
            const double base_inverse = std::min(1.0, c.base->FbarInverse(r));
            return std::max(0.0, base_inverse - c.tau);
          },
      },
      repr_);
}

double TradeoffFunction::epsilon() const {
  const auto* c = std::get_if<EpsDeltaCurve>(&repr_);
  return c ? c->eps : std::numeric_limits<double>::quiet_NaN();
}

double TradeoffFunction::delta() const {
  const auto* c = std::get_if<EpsDeltaCurve>(&repr_);
  return c ? c->delta : std::numeric_limits<double>::quiet_NaN();
}

double TradeoffFunction::mu() const {
  const auto* c = std::get_if<GaussianCurve>(&repr_);
  return c ? c->mu : std::numeric_limits<double>::quiet_NaN();
}

double TradeoffFunction::tau() const {
  const auto* c = std::get_if<ShiftedCurve>(&repr_);
  return c ? c->tau : 0.0;
}

const TradeoffFunction& TradeoffFunction::base() const {
  const auto* c = std::get_if<ShiftedCurve>(&repr_);
  return c ? *c->base : *this;
}

std::string TradeoffFunction::DebugString() const {
  return std::visit(
      Overloaded{
          [](const EpsDeltaCurve& c) {
            return absl::StrFormat("EpsDelta(eps=%g, delta=%g)", c.eps,
                                   c.delta);
          },
          [](const GaussianCurve& c) {
            return absl::StrFormat("Gaussian(mu=%g)", c.mu);
          },
          [](const ShiftedCurve& c) {
            return absl::StrFormat("Shifted(%s, tau=%g)",
                                   c.base->DebugString(), c.tau);
          },
      },
      repr_);
}

absl::StatusOr<double> EvalEpsDelta(double eps, double delta, double x) {
  if (!InUnitInterval(x)) {
    return absl::InvalidArgumentError(
        absl::StrCat("EvalEpsDelta: x must lie in [0, 1], got ", x));
  }
  absl::StatusOr<TradeoffFunction> f = TradeoffFunction::EpsDelta(eps, delta);
  if (!f.ok()) return f.status();
  return f->Eval(x);
}

absl::StatusOr<double> EvalGaussian(double mu, double x) {
  if (!InUnitInterval(x)) {
    return absl::InvalidArgumentError(
        absl::StrCat("EvalGaussian: x must lie in [0, 1], got ", x));
  }
  absl::StatusOr<TradeoffFunction> f = TradeoffFunction::Gaussian(mu);
  if (!f.ok()) return f.status();
  return f->Eval(x);
}

absl::StatusOr<TradeoffFunction> ShiftTradeoff(const TradeoffFunction& f,
                                               double tau) {
  if (!InUnitInterval(tau)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ShiftTradeoff: tau must lie in [0, 1], got ", tau));
  }
  return TradeoffFunction(TradeoffFunction::ShiftedCurve{
      std::make_shared<const TradeoffFunction>(f), tau});
}

absl::StatusOr<double> FbarInverse(const TradeoffFunction& f, double r) {
  if (!InUnitInterval(r)) {
    return absl::InvalidArgumentError(
        absl::StrCat("FbarInverse: r must lie in [0, 1], got ", r));
  }
  return f.FbarInverse(r);
}

double FbarInverseByBisection(const TradeoffFunction& f, double r) {
  if (f.Complement(1.0) <= r) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 100 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f.Complement(mid) <= r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

absl::StatusOr<double> EpsFromTradeoff(const TradeoffFunction& f,
                                       double delta) {
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("EpsFromTradeoff: delta must lie in [0, 1), got ",
                     delta));
  }
  // Objective in u = log(x); -inf where the numerator is not positive. Where
  // 1 - f(x) and delta agree to more than six digits the difference is mostly
  // rounding error, which on a linear branch would otherwise win the max.
  auto objective = [&f, delta](double u) {
    const double x = std::exp(u);
    const double complement = f.Complement(x);
    const double numerator = complement - delta;
    if (numerator <= 1e-6 * complement) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::log(numerator) - u;
  };

  const double u_min = kEpsGridMinLog10 * std::log(10.0);
  const double step = -u_min / (kEpsGridPoints - 1);
  double best = -std::numeric_limits<double>::infinity();
  int best_index = -1;
  for (int i = 0; i < kEpsGridPoints; ++i) {
    const double value = objective(u_min + i * step);
    if (value > best) {
      best = value;
      best_index = i;
    }
  }
  if (best_index < 0) return 0.0;

  double a = u_min + std::max(0, best_index - 1) * step;
  double b = u_min + std::min(kEpsGridPoints - 1, best_index + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int i = 0; i < kGoldenIterations && b - a > 1e-14; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
    best = std::max({best, fc, fd});
  }
  return std::max(0.0, best);
}

absl::Status GaussianFamily::Validate() const {
  if (!(mu_min > 0) || !(mu_max > mu_min) || std::isinf(mu_max)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "GaussianFamily: need 0 < mu_min < mu_max < inf, got [%g, %g]", mu_min,
        mu_max));
  }
  if (!(tolerance > 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "GaussianFamily: tolerance must be positive, got ", tolerance));
  }
  return absl::OkStatus();
}

}  // namespace obsaudit
