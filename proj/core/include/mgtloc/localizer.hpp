// Copyright 2026 The mgtloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGTLOC_LOCALIZER_HPP_
#define MGTLOC_LOCALIZER_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgtloc/adaloc.hpp"
#include "mgtloc/scorers.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc {

inline constexpr int kDefaultWindow = 3;

enum class Strategy { kSingle, kVote, kAdalocVote, kAdalocSkip, kAdalocMiddle };
enum class Aggregation { kVote, kSkip, kMiddle };

// How a sentence's window labels are combined. kMajority binarizes each
// window and takes a strict majority (ties go to mean score >= threshold);
// kMeanScore thresholds the mean score directly.
enum class VoteRule { kMajority, kMeanScore };

std::string_view strategy_name(Strategy strategy);
Strategy parse_strategy(std::string_view name);
std::string_view aggregation_name(Aggregation aggregation);
Aggregation parse_aggregation(std::string_view name);
Strategy adaloc_strategy(Aggregation aggregation);

struct Window {
  int first = 0;
  int last = 0;  // inclusive

  int size() const { return last - first + 1; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct WindowPlan {
  int m = 1;
  int step = 1;
  std::vector<Window> windows;
};

// Step 1: windows [i, i+m-1] for i = 0 .. n-m. Larger steps (up to m) start a
// window every `step` sentences; with step m the windows are disjoint and
// the last may be shorter. n <= m gives the single window [0, n-1].
// Throws UsageError when m < 1, step is outside [1, m] or n < 1.
WindowPlan plan_windows(int n_sentences, int m, int step);

struct LocalizeOptions {
  double threshold = 0.5;
  VoteRule vote_rule = VoteRule::kMajority;
};

struct LocalizationResult {
  std::string article_id;
  Strategy strategy = Strategy::kSingle;
  int m = 1;
  std::vector<SentencePrediction> predictions;

  friend bool operator==(const LocalizationResult&,
                         const LocalizationResult&) = default;
};

// Label for a sentence from its window votes and the mean raw score of the
// covering windows.
int resolve_votes(std::span<const int> votes, double mean_score,
                  const LocalizeOptions& options);

// Assigns each window's score to every sentence it covers and resolves the
// votes per sentence. `window_scores[w]` belongs to `plan.windows[w]`.
std::vector<SentencePrediction> aggregate_window_scores(
    int n_sentences, const WindowPlan& plan, std::span<const double> window_scores,
    const LocalizeOptions& options);

// Combines per-position AdaLoc outputs. `window_probs[w][k]` is the
// probability for sentence plan.windows[w].first + k.
std::vector<SentencePrediction> aggregate_position_outputs(
    int n_sentences, const WindowPlan& plan,
    const std::vector<std::vector<double>>& window_probs,
    Aggregation aggregation, const LocalizeOptions& options);

// One scorer request per article covering every window of `plan`.
std::vector<double> score_windows(const Article& article, ChunkScorer& scorer,
                                  const WindowPlan& plan);
std::vector<std::vector<double>> feature_windows(const Article& article,
                                                 ChunkScorer& scorer,
                                                 const WindowPlan& plan);

// Window step used by each aggregation (m for skip, 1 otherwise).
int aggregation_step(Aggregation aggregation, int m);

LocalizationResult localize_single(const Article& article, ChunkScorer& scorer,
                                   const LocalizeOptions& options = {});

LocalizationResult localize_vote(const Article& article, ChunkScorer& scorer,
                                 int m, const LocalizeOptions& options = {});

// `feature_scorer` must produce vectors of model.feature_dim() and
// model.m must equal m.
LocalizationResult localize_adaloc(const Article& article,
                                   ChunkScorer& feature_scorer,
                                   const AdaLocModel& model, int m,
                                   Aggregation aggregation,
                                   const LocalizeOptions& options = {});

// Prediction JSONL: {"article_id", "strategy", "m",
//                    "predictions": [{"idx", "score", "label"}]}
std::string encode_localization(const LocalizationResult& result);
LocalizationResult decode_localization(std::string_view line);
std::vector<LocalizationResult> read_localizations(
    const std::filesystem::path& path);

}  // namespace mgtloc

#endif  // MGTLOC_LOCALIZER_HPP_
