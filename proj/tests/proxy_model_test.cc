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

#include "obsaudit/proxy_model.h"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "obsaudit/gaussian_mixture.h"
#include "obsaudit/rng.h"

namespace obsaudit {
namespace {

using ::testing::DoubleNear;
using ::testing::Pointwise;

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/obsaudit_proxy_model_" + name;
}

LogisticWeights SmallWeights() {
  LogisticWeights weights;
  weights.k = 3;
  weights.d = 2;
  weights.w = {0.1, -2.5, 0.3, 1e-17, 4.0, -0.75, 3.25, 0.0, 1.0 / 3};
  return weights;
}

TEST(ProxyModelTest, ShiftedMovesMassToClassOne) {
  const ProxyModel proxy = *ProxyModel::Shifted(0.05);
  const std::vector<double> neutral = {0.0, 0.0};
  EXPECT_THAT(*proxy.PredictProba(neutral),
              Pointwise(DoubleNear(1e-15), {0.45, 0.55}));
  EXPECT_EQ(proxy.kind(), ProxyModel::Kind::kShifted);
  EXPECT_EQ(proxy.tau(), 0.05);
  EXPECT_EQ(proxy.name(), "shifted");
  EXPECT_EQ(proxy.num_classes(), 2);
}

TEST(ProxyModelTest, ShiftedIsWithinTotalVariationTau) {
  Rng rng(1);
  const double tau = 0.07;
  const ProxyModel shifted = *ProxyModel::Shifted(tau);
  const ProxyModel truth = *ProxyModel::GroundTruth(2);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x = {6 * UniformDouble(rng) - 3,
                                   6 * UniformDouble(rng) - 3};
    const std::vector<double> p = *shifted.PredictProba(x);
    const std::vector<double> q = *truth.PredictProba(x);
    const double tv = 0.5 * (std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]));
    EXPECT_LE(tv, tau + 1e-15);
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
    EXPECT_GE(p[0], 0.0);
  }
}

TEST(ProxyModelTest, GroundTruthIsTheMixturePosterior) {
  const ProxyModel proxy = *ProxyModel::GroundTruth(3);
  const std::vector<double> x = {0.2, -1.0, 2.0, 9.0};
  EXPECT_EQ(*proxy.PredictProba(x), *TruePosterior(x, 3));
  EXPECT_EQ(proxy.name(), "ground_truth");
  EXPECT_EQ(proxy.tau(), 0.0);
  EXPECT_EQ(proxy.logistic_weights(), nullptr);
}

TEST(ProxyModelTest, LogisticDelegatesToWeights) {
  const ProxyModel proxy = *ProxyModel::Logistic(SmallWeights());
  const std::vector<double> x = {0.5, -0.5};
  std::vector<double> expected(3);
  SmallWeights().PredictInto(x, expected);
  EXPECT_EQ(*proxy.PredictProba(x), expected);
  EXPECT_EQ(proxy.name(), "logistic");
  ASSERT_NE(proxy.logistic_weights(), nullptr);
  EXPECT_EQ(proxy.num_classes(), 3);
}

TEST(ProxyModelTest, FactoriesValidateArguments) {
  EXPECT_FALSE(ProxyModel::GroundTruth(1).ok());
  EXPECT_FALSE(ProxyModel::Shifted(-0.1).ok());
  EXPECT_FALSE(ProxyModel::Shifted(1.1).ok());
  LogisticWeights bad = SmallWeights();
  bad.w.pop_back();
  EXPECT_FALSE(ProxyModel::Logistic(bad).ok());
}

TEST(ProxyModelTest, PredictRejectsWrongShapes) {
  const ProxyModel logistic = *ProxyModel::Logistic(SmallWeights());
  const std::vector<double> three = {1, 2, 3};
  EXPECT_FALSE(logistic.PredictProba(three).ok());
  const ProxyModel truth = *ProxyModel::GroundTruth(3);
  const std::vector<double> two = {1, 2};
  EXPECT_FALSE(truth.PredictProba(two).ok());
  std::vector<double> out(2);
  EXPECT_FALSE(truth.PredictProbaInto(three, out).ok());
}

TEST(SampleCategoricalTest, FrequenciesMatchProbabilities) {
  const std::vector<double> proba = {0.1, 0.0, 0.6, 0.3};
  constexpr int kDraws = 300000;
  std::vector<int> counts(4, 0);
  Rng rng(3);
  for (int i = 0; i < kDraws; ++i) ++counts[SampleCategorical(proba, rng)];
  EXPECT_EQ(counts[1], 0);
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(counts[c] / double{kDraws}, proba[c],
                5 * std::sqrt(proba[c] * (1 - proba[c]) / kDraws));
  }
}

TEST(SampleCategoricalTest, NeverPicksTrailingZeroMass) {
  // Rounding slack in the cumulative sum must not land on a zero-mass class.
  const std::vector<double> proba = {0.3, 0.7 - 1e-17, 0.0};
  Rng rng(4);
  for (int i = 0; i < 100000; ++i) EXPECT_NE(SampleCategorical(proba, rng), 2);
}

TEST(SampleCounterfactualTest, FollowsPredictedDistribution) {
  const ProxyModel proxy = *ProxyModel::Shifted(0.2);
  const std::vector<double> x = {0.0, 0.0};
  Rng rng(5);
  constexpr int kDraws = 100000;
  int ones = 0;
  for (int i = 0; i < kDraws; ++i) ones += *proxy.SampleCounterfactual(x, rng);
  EXPECT_NEAR(ones / double{kDraws}, 0.7, 5 * std::sqrt(0.21 / kDraws));
}

TEST(ProxyModelIoTest, LogisticRoundTripIsBitExact) {
  const std::string path = TempPath("weights.txt");
  ASSERT_TRUE(SaveProxyModel(*ProxyModel::Logistic(SmallWeights()), path).ok());
  const ProxyModel loaded = *LoadProxyModel(path);
  ASSERT_NE(loaded.logistic_weights(), nullptr);
  EXPECT_EQ(loaded.logistic_weights()->w, SmallWeights().w);
  EXPECT_EQ(loaded.logistic_weights()->d, 2);
}

TEST(ProxyModelIoTest, OnlyLogisticCanBeSaved) {
  EXPECT_EQ(SaveProxyModel(*ProxyModel::GroundTruth(2), TempPath("gt.txt"))
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(ProxyModelIoTest, LoadRejectsMalformedFiles) {
  EXPECT_EQ(LoadProxyModel(TempPath("missing.txt")).status().code(),
            absl::StatusCode::kNotFound);
  const std::vector<std::string> bad = {
      "wrong header\n",
      "obsaudit-logistic 1\nk 2\n",
      "obsaudit-logistic 1\nk 2 d 1\n1 2 3\n",
      "obsaudit-logistic 1\nk 2 d 1\n1 2 3 zz\n",
  };
  for (size_t i = 0; i < bad.size(); ++i) {
    const std::string path = TempPath("bad" + std::to_string(i));
    std::ofstream(path) << bad[i];
    EXPECT_EQ(LoadProxyModel(path).status().code(),
              absl::StatusCode::kInvalidArgument)
        << bad[i];
  }
}

}  // namespace
}  // namespace obsaudit
