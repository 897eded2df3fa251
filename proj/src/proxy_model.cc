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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "obsaudit/gaussian_mixture.h"

namespace obsaudit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr char kModelMagic[] = "obsaudit-logistic 1";

}  // namespace

absl::StatusOr<ProxyModel> ProxyModel::GroundTruth(int num_classes) {
  if (num_classes < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ProxyModel::GroundTruth: need at least 2 classes, got ",
        num_classes));
  }
  return ProxyModel(GroundTruthProxy{}, num_classes);
}

absl::StatusOr<ProxyModel> ProxyModel::Shifted(double tau) {
  if (!(tau >= 0 && tau <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ProxyModel::Shifted: tau must lie in [0, 1], got ", tau));
  }
  return ProxyModel(ShiftedProxy{tau}, 2);
}

absl::StatusOr<ProxyModel> ProxyModel::Logistic(LogisticWeights weights) {
  if (weights.k < 2 || weights.d < 1 ||
      weights.w.size() != static_cast<size_t>(weights.k) * (weights.d + 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ProxyModel::Logistic: malformed weights (k=", weights.k,
        ", d=", weights.d, ", |w|=", weights.w.size(), ")"));
  }
  for (double v : weights.w) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError(
          "ProxyModel::Logistic: non-finite weight");
    }
  }
  const int k = weights.k;
  return ProxyModel(std::move(weights), k);
}

ProxyModel::Kind ProxyModel::kind() const {
  return std::visit(
      Overloaded{
          [](const GroundTruthProxy&) { return Kind::kGroundTruth; },
          [](const ShiftedProxy&) { return Kind::kShifted; },
          [](const LogisticWeights&) { return Kind::kLogistic; },
      },
      repr_);
}

double ProxyModel::tau() const {
  const auto* shifted = std::get_if<ShiftedProxy>(&repr_);
  return shifted ? shifted->tau : 0.0;
}

const LogisticWeights* ProxyModel::logistic_weights() const {
  return std::get_if<LogisticWeights>(&repr_);
}

std::string_view ProxyModel::name() const {
  switch (kind()) {
    case Kind::kGroundTruth:
      return "ground_truth";
    case Kind::kShifted:
      return "shifted";
    case Kind::kLogistic:
      return "logistic";
  }
  return "unknown";
}

absl::Status ProxyModel::PredictProbaInto(std::span<const double> x,
                                          std::span<double> out) const {
  if (static_cast<int>(out.size()) != num_classes_) {
    return absl::InvalidArgumentError(
        absl::StrCat("PredictProba: output has ", out.size(),
                     " entries, expected ", num_classes_));
  }
  return std::visit(
      Overloaded{
          [&](const GroundTruthProxy&) -> absl::Status {
            if (static_cast<int>(x.size()) < num_classes_) {
              return absl::InvalidArgumentError(absl::StrCat(
                  "PredictProba: ground-truth proxy needs at least ",
                  num_classes_, " features, got ", x.size()));
            }
            TruePosteriorInto(x, out);
            return absl::OkStatus();
          },
          [&](const ShiftedProxy& shifted) -> absl::Status {
            if (x.size() < 2) {
              return absl::InvalidArgumentError(
                  "PredictProba: shifted proxy needs at least 2 features");
            }
            double posterior[2];
            TruePosteriorInto(x, posterior);
            const double p1 = std::min(posterior[1] + shifted.tau, 1.0);
            out[0] = 1.0 - p1;
            out[1] = p1;
            return absl::OkStatus();
          },
          [&](const LogisticWeights& weights) -> absl::Status {
            if (static_cast<int>(x.size()) != weights.d) {
              return absl::InvalidArgumentError(
                  absl::StrCat("PredictProba: logistic proxy expects ",
                               weights.d, " features, got ", x.size()));
            }
            weights.PredictInto(x, out);
            return absl::OkStatus();
          },
      },
      repr_);
}

absl::StatusOr<std::vector<double>> ProxyModel::PredictProba(
    std::span<const double> x) const {
  std::vector<double> proba(num_classes_);
  if (absl::Status status = PredictProbaInto(x, proba); !status.ok()) {
    return status;
  }
  return proba;
}

absl::StatusOr<int> ProxyModel::SampleCounterfactual(std::span<const double> x,
                                                     Rng& rng) const {
  absl::StatusOr<std::vector<double>> proba = PredictProba(x);
  if (!proba.ok()) return proba.status();
  return SampleCategorical(*proba, rng);
}

int SampleCategorical(std::span<const double> proba, Rng& rng) {
  const double u = UniformDouble(rng);
  double cumulative = 0;
  const int last = static_cast<int>(proba.size()) - 1;
  for (int c = 0; c < last; ++c) {
    cumulative += proba[c];
    if (u < cumulative) return c;
  }
  // Remaining mass (including rounding slack) goes to the last class, unless
  // it is exactly zero.
  for (int c = last; c > 0; --c) {
    if (proba[c] > 0) return c;
  }
  return 0;
}

absl::Status SaveProxyModel(const ProxyModel& model, const std::string& path) {
  const LogisticWeights* weights = model.logistic_weights();
  if (weights == nullptr) {
    return absl::InvalidArgumentError(absl::StrCat(
        "SaveProxyModel: only logistic proxies can be saved, got ",
        std::string(model.name())));
  }
  std::ofstream out(path);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("SaveProxyModel: cannot open ", path, " for writing"));
  }
  out << kModelMagic << "\n"
      << "k " << weights->k << " d " << weights->d << "\n";
  for (int c = 0; c < weights->k; ++c) {
    std::span<const double> row = weights->class_row(c);
    for (size_t j = 0; j < row.size(); ++j) {
      char buffer[32];
      auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), row[j]);
      if (j > 0) out << ' ';
      out.write(buffer, end - buffer);
    }
    out << "\n";
  }
  if (!out) {
    return absl::DataLossError(
        absl::StrCat("SaveProxyModel: write to ", path, " failed"));
  }
  return absl::OkStatus();
}

absl::StatusOr<ProxyModel> LoadProxyModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("LoadProxyModel: cannot open ", path));
  }
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) {
    return absl::InvalidArgumentError(absl::StrCat(
        "LoadProxyModel: ", path, " lacks the '", kModelMagic, "' header"));
  }
  LogisticWeights weights;
  std::string k_key, d_key;
  if (!(in >> k_key >> weights.k >> d_key >> weights.d) || k_key != "k" ||
      d_key != "d" || weights.k < 2 || weights.d < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("LoadProxyModel: ", path, ": bad 'k <k> d <d>' line"));
  }
  weights.w.resize(static_cast<size_t>(weights.k) * (weights.d + 1));
  for (double& v : weights.w) {
    std::string token;
    if (!(in >> token)) {
      return absl::InvalidArgumentError(
          absl::StrCat("LoadProxyModel: ", path, ": too few weights"));
    }
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "LoadProxyModel: ", path, ": bad weight '", token, "'"));
    }
  }
  return ProxyModel::Logistic(std::move(weights));
}

}  // namespace obsaudit
