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

#include "obsaudit/normal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace obsaudit {
namespace {

// Acklam's rational approximation, relative error ~1.15e-9.
double AcklamQuantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  if (p < kLow) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - kLow) {
    const double q = std::sqrt(-2 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

double NormalCdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double NormalQuantile(double p) {
  if (std::isnan(p)) return p;
  if (p <= 0) return -std::numeric_limits<double>::infinity();
  if (p >= 1) return std::numeric_limits<double>::infinity();

  // Deep tails: Newton on log Phi, which stays well conditioned where Phi
  // itself changes by orders of magnitude per unit of x.
  const double tail = std::min(p, 1 - p);
  if (tail < 1e-8) {
    double z = AcklamQuantile(tail);
    for (int i = 0; i < 8; ++i) {
      const double cdf = NormalCdf(z);
      const double pdf =
          std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
      const double step = (std::log(cdf) - std::log(tail)) * cdf / pdf;
      z -= step;
      if (std::abs(step) < 1e-15 * std::abs(z)) break;
    }
    return p < 0.5 ? z : -z;
  }

  double x = AcklamQuantile(p);
  // Halley step. The residual is taken in the tail closest to p so that it
  // stays relatively accurate for p near 0 or 1.
  const double pdf =
      std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
  const double err = p < 0.5 ? NormalCdf(x) - p : (1 - p) - NormalCdf(-x);
  const double u = err / pdf;
  x -= u / (1 + 0.5 * x * u);
  return x;
}

}  // namespace obsaudit
