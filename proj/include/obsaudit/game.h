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

#ifndef OBSAUDIT_GAME_H_
#define OBSAUDIT_GAME_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "obsaudit/audit_outcome.h"
#include "obsaudit/gaussian_mixture.h"
#include "obsaudit/proxy_model.h"
#include "obsaudit/randomized_response.h"
#include "obsaudit/rng.h"

namespace obsaudit {

// Hidden bits b_i ~ Bernoulli(1/2) and counterfactual labels y1_i ~ D' | x_i.
struct GameArtifacts {
  std::vector<uint8_t> b;
  std::vector<int> y1;

  int64_t size() const { return static_cast<int64_t>(b.size()); }
};

struct GameTranscript {
  // M(D0): the mechanism's output on the untouched training labels.
  std::vector<int> noisy_labels;
  GameArtifacts artifacts;
  // y^{b_i}: the label shown to the adversary for sample i.
  std::vector<int> shown_labels;
};

// Proxy probabilities for every sample, n x k row-major. The game resamples
// counterfactuals many times against the same dataset, so these are
// computed once.
struct ProxyTable {
  int64_t n = 0;
  int k = 0;
  std::vector<double> proba;

  std::span<const double> row(int64_t i) const {
    return std::span<const double>(proba).subspan(static_cast<size_t>(i) * k,
                                                  k);
  }
};

absl::StatusOr<ProxyTable> TabulateProxy(const LabeledDataset& data,
                                         const ProxyModel& proxy);

// Draws (b_i, y1_i) for every sample, in index order, b before y1.
GameArtifacts SampleGameArtifacts(const ProxyTable& table, Rng& rng);

// shown_i = y0_i if b_i == 0, else y1_i.
std::vector<int> ShowLabels(std::span<const int> y0,
                            const GameArtifacts& artifacts);

// One observational game with every sample as a canary: the mechanism runs on
// the training labels first, then the artifacts are drawn from the same
// stream.
absl::StatusOr<GameTranscript> PlayGame(const LabeledDataset& data,
                                        const RandomizedResponse& mechanism,
                                        const ProxyModel& proxy, Rng& rng);

struct ScoredGame {
  std::vector<double> scores;
  std::vector<int> shown_labels;
  // Set by the caller once the scores are attached to a transcript; needed to
  // tally guesses.
  std::shared_ptr<const GameArtifacts> artifacts;
};

// How the first score term reads the mechanism's output for sample i.
enum class ScoreMode {
  // The noisy label as a one-hot prediction: Pr[y0 = shown | M] is
  // 1[noisy == shown]. Ranks samples by how unlikely the shown label is under
  // the proxy when the mechanism reproduced it.
  kIndicator,
  // The Bayes posterior of the shown label given the noisy one, with the
  // proxy as prior.
  kPosterior,
};

std::string_view ScoreModeName(ScoreMode mode);
absl::StatusOr<ScoreMode> ParseScoreMode(std::string_view name);

// score_i = s1 * s2^t with
//   s1 = Pr[y0 = shown | noisy label] - Pr_{D'}[shown | x]
//   s2 = 1 - Pr_{D'}[shown | x]
// where the first probability is given by `mode`. Positive scores point at
// the real training label.
absl::StatusOr<ScoredGame> ScoreSamples(std::span<const int> noisy_labels,
                                        std::span<const int> shown_labels,
                                        const LabeledDataset& data,
                                        const RandomizedResponse& mechanism,
                                        const ProxyModel& proxy, double t,
                                        ScoreMode mode = ScoreMode::kIndicator);

// Same scores from a precomputed proxy table; `out` has one entry per sample.
void ScoreWithTable(std::span<const int> noisy_labels,
                    std::span<const int> shown_labels, const ProxyTable& table,
                    const RandomizedResponse& mechanism, double t,
                    ScoreMode mode, std::span<double> out);

enum class Guess : int8_t { kAbstain = -1, kZero = 0, kOne = 1 };

struct GuessVector {
  std::vector<Guess> guesses;
  int64_t c_prime = 0;
};

// round-half-up(fraction * m).
int64_t GuessCount(double fraction, int64_t m);

// Sample indices ordered by decreasing |score|, ties by increasing index.
std::vector<int64_t> RankByConfidence(std::span<const double> scores);

// Guesses on the round(fraction * m) samples with the largest |score|:
// 0 (real label) for a positive score, 1 otherwise. Everything else abstains.
absl::StatusOr<GuessVector> MakeGuesses(std::span<const double> scores,
                                        double fraction);
inline absl::StatusOr<GuessVector> MakeGuesses(const ScoredGame& scored,
                                               double fraction) {
  return MakeGuesses(scored.scores, fraction);
}

absl::StatusOr<AuditOutcome> Tally(const GuessVector& guesses,
                                   const GameArtifacts& artifacts);

// Per-sample debug dump: index,b,y0,y1,noisy,shown,score,guess.
absl::Status WriteTranscript(const std::string& path, std::span<const int> y0,
                             const GameTranscript& transcript,
                             std::span<const double> scores,
                             const GuessVector& guesses);

}  // namespace obsaudit

#endif  // OBSAUDIT_GAME_H_
