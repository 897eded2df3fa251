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

#ifndef OBSAUDIT_NORMAL_H_
#define OBSAUDIT_NORMAL_H_

namespace obsaudit {

// Standard normal CDF. Accurate to full double precision in both tails
// (computed through erfc, never as 1 - small).
double NormalCdf(double z);

// Standard normal quantile. Returns -inf at p = 0 and +inf at p = 1; p is
// clamped into [0, 1]. Absolute error in the CDF domain is below 1e-15 after
// one Halley refinement of Acklam's rational approximation.
double NormalQuantile(double p);

}  // namespace obsaudit

#endif  // OBSAUDIT_NORMAL_H_
