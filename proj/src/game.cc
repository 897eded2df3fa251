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

#include "obsaudit/game.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace obsaudit {
namespace {

// Strict total order: larger |score| first, then smaller index.
struct MoreConfident {
  std::span<const double> scores;
  bool operator()(int64_t a, int64_t b) const {
    const double fa = std::abs(scores[a]);
    const double fb = std::abs(scores[b]);
    if (fa != fb) return fa > fb;
    return a < b;
  }
};

Guess GuessFromScore(double score) {
  return score > 0 ? Guess::kZero : Guess::kOne;
}

}  // namespace

absl::StatusOr<ProxyTable> TabulateProxy(const LabeledDataset& data,
                                         const ProxyModel& proxy) {
  if (proxy.num_classes() != data.k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "TabulateProxy: proxy has ", proxy.num_classes(),
        " classes, dataset has ", data.k));
  }
  ProxyTable table;
  table.n = data.n;
  table.k = data.k;
  table.proba.resize(static_cast<size_t>(data.n) * data.k);
  for (int64_t i = 0; i < data.n; ++i) {
    std::span<double> out = std::span<double>(table.proba).subspan(
        static_cast<size_t>(i) * data.k, data.k);
    if (absl::Status status = proxy.PredictProbaInto(data.row(i), out);
        !status.ok()) {
      return status;
    }
  }
  return table;
}

GameArtifacts SampleGameArtifacts(const ProxyTable& table, Rng& rng) {
  GameArtifacts artifacts;
  artifacts.b.resize(table.n);
  artifacts.y1.resize(table.n);
  for (int64_t i = 0; i < table.n; ++i) {
    artifacts.b[i] = static_cast<uint8_t>(rng() >> 63);
    artifacts.y1[i] = SampleCategorical(table.row(i), rng);
  }
  return artifacts;
}

std::vector<int> ShowLabels(std::span<const int> y0,
                            const GameArtifacts& artifacts) {
  std::vector<int> shown(y0.size());
  for (size_t i = 0; i < y0.size(); ++i) {
    shown[i] = artifacts.b[i] == 0 ? y0[i] : artifacts.y1[i];
  }
  return shown;
}

absl::StatusOr<GameTranscript> PlayGame(const LabeledDataset& data,
                                        const RandomizedResponse& mechanism,
                                        const ProxyModel& proxy, Rng& rng) {
  if (mechanism.num_classes() != data.k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PlayGame: mechanism has ", mechanism.num_classes(),
        " classes, dataset has ", data.k));
  }
  GameTranscript transcript;
  absl::StatusOr<std::vector<int>> noisy =
      ApplyRandomizedResponse(mechanism, data.y0, rng);
  if (!noisy.ok()) return noisy.status();
  transcript.noisy_labels = *std::move(noisy);

  absl::StatusOr<ProxyTable> table = TabulateProxy(data, proxy);
  if (!table.ok()) return table.status();
  transcript.artifacts = SampleGameArtifacts(*table, rng);
  transcript.shown_labels = ShowLabels(data.y0, transcript.artifacts);
  return transcript;
}

std::string_view ScoreModeName(ScoreMode mode) {
  return mode == ScoreMode::kIndicator ? "indicator" : "posterior";
}

absl::StatusOr<ScoreMode> ParseScoreMode(std::string_view name) {
  if (name == "indicator") return ScoreMode::kIndicator;
  if (name == "posterior") return ScoreMode::kPosterior;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown score mode '", std::string(name),
                   "' (expected indicator or posterior)"));
}

void ScoreWithTable(std::span<const int> noisy_labels,
                    std::span<const int> shown_labels, const ProxyTable& table,
                    const RandomizedResponse& mechanism, double t,
                    ScoreMode mode, std::span<double> out) {
  const bool indicator = mode == ScoreMode::kIndicator;
  for (int64_t i = 0; i < table.n; ++i) {
    std::span<const double> prior = table.row(i);
    const int shown = shown_labels[i];
    const int noisy = noisy_labels[i];
    const double prior_shown = prior[shown];
    const double reproduced =
        indicator
            ? (noisy == shown ? 1.0 : 0.0)
            : mechanism.PosteriorOf(shown, noisy, prior_shown, prior[noisy]);
    const double s1 = reproduced - prior_shown;
    const double s2 = 1.0 - prior_shown;
    out[i] = t == 2.0 ? s1 * s2 * s2 : s1 * std::pow(s2, t);
  }
}

absl::StatusOr<ScoredGame> ScoreSamples(std::span<const int> noisy_labels,
                                        std::span<const int> shown_labels,
                                        const LabeledDataset& data,
                                        const RandomizedResponse& mechanism,
                                        const ProxyModel& proxy, double t,
                                        ScoreMode mode) {
  if (!(t >= 0) || std::isinf(t)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ScoreSamples: t must be finite and >= 0, got ", t));
  }
  if (static_cast<int64_t>(noisy_labels.size()) != data.n ||
      static_cast<int64_t>(shown_labels.size()) != data.n) {
    return absl::InvalidArgumentError(
        "ScoreSamples: label arrays must have one entry per sample");
  }
  if (mechanism.num_classes() != data.k) {
    return absl::InvalidArgumentError(
        "ScoreSamples: mechanism and dataset disagree on k");
  }
  for (int64_t i = 0; i < data.n; ++i) {
    if (noisy_labels[i] < 0 || noisy_labels[i] >= data.k ||
        shown_labels[i] < 0 || shown_labels[i] >= data.k) {
      return absl::InvalidArgumentError(
          absl::StrCat("ScoreSamples: label out of range at index ", i));
    }
  }
  absl::StatusOr<ProxyTable> table = TabulateProxy(data, proxy);
  if (!table.ok()) return table.status();
  ScoredGame scored;
  scored.shown_labels.assign(shown_labels.begin(), shown_labels.end());
  scored.scores.resize(data.n);
  ScoreWithTable(noisy_labels, shown_labels, *table, mechanism, t, mode,
                 scored.scores);
  return scored;
}

int64_t GuessCount(double fraction, int64_t m) {
  return static_cast<int64_t>(
      std::floor(fraction * static_cast<double>(m) + 0.5));
}

std::vector<int64_t> RankByConfidence(std::span<const double> scores) {
  std::vector<int64_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), MoreConfident{scores});
  return order;
}

absl::StatusOr<GuessVector> MakeGuesses(std::span<const double> scores,
                                        double fraction) {
  if (!(fraction > 0 && fraction <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("MakeGuesses: fraction must lie in (0, 1], got ",
                     fraction));
  }
  const int64_t m = static_cast<int64_t>(scores.size());
  const int64_t c_prime = GuessCount(fraction, m);
  if (c_prime < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "MakeGuesses: fraction %g of %d samples rounds to zero guesses",
        fraction, m));
  }
  std::vector<int64_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  if (c_prime < m) {
    std::nth_element(order.begin(), order.begin() + (c_prime - 1), order.end(),
                     MoreConfident{scores});
  }
  GuessVector result;
  result.c_prime = c_prime;
  result.guesses.assign(m, Guess::kAbstain);
  for (int64_t j = 0; j < c_prime; ++j) {
    const int64_t i = order[j];
    result.guesses[i] = GuessFromScore(scores[i]);
  }
  return result;
}

absl::StatusOr<AuditOutcome> Tally(const GuessVector& guesses,
                                   const GameArtifacts& artifacts) {
  if (static_cast<int64_t>(guesses.guesses.size()) != artifacts.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Tally: ", guesses.guesses.size(), " guesses for ", artifacts.size(),
        " samples"));
  }
  AuditOutcome outcome;
  outcome.m = artifacts.size();
  for (int64_t i = 0; i < outcome.m; ++i) {
    const Guess g = guesses.guesses[i];
    if (g == Guess::kAbstain) continue;
    ++outcome.c_prime;
    if (static_cast<int>(g) == artifacts.b[i]) ++outcome.c;
  }
  return outcome;
}

absl::Status WriteTranscript(const std::string& path, std::span<const int> y0,
                             const GameTranscript& transcript,
                             std::span<const double> scores,
                             const GuessVector& guesses) {
  const size_t m = y0.size();
  if (transcript.noisy_labels.size() != m ||
      static_cast<size_t>(transcript.artifacts.size()) != m ||
      transcript.shown_labels.size() != m || scores.size() != m ||
      guesses.guesses.size() != m) {
    return absl::InvalidArgumentError(
        "WriteTranscript: per-sample arrays differ in length");
  }
  std::ofstream out(path);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("WriteTranscript: cannot open ", path, " for writing"));
  }
  out << "index,b,y0,y1,noisy,shown,score,guess\n";
  for (size_t i = 0; i < m; ++i) {
    const Guess g = guesses.guesses[i];
    out << i << ',' << static_cast<int>(transcript.artifacts.b[i]) << ','
        << y0[i] << ',' << transcript.artifacts.y1[i] << ','
        << transcript.noisy_labels[i] << ',' << transcript.shown_labels[i]
        << ',' << absl::StrFormat("%.17g", scores[i]) << ','
        << (g == Guess::kAbstain ? std::string("abstain")
                                 : std::to_string(static_cast<int>(g)))
        << '\n';
  }
  if (!out) {
    return absl::DataLossError(
        absl::StrCat("WriteTranscript: write to ", path, " failed"));
  }
  return absl::OkStatus();
}

}  // namespace obsaudit
