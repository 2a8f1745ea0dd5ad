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

#ifndef MGTLOC_NGRAM_SCORER_HPP_
#define MGTLOC_NGRAM_SCORER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mgtloc/scorers.hpp"

namespace mgtloc {

struct LabeledText {
  std::string text;
  int label = kHuman;
};

// Character n-gram likelihood-ratio detector. Self-contained stand-in for a
// neural detector so every stage can run offline; it makes no claim to match
// any published baseline.
struct NgramScorerModel {
  struct LogFreq {
    double machine = 0.0;
    double human = 0.0;
  };

  int order = 4;
  // Add-one smoothed log relative frequency per packed n-gram.
  std::unordered_map<std::uint64_t, LogFreq> log_freq;
  double unseen_machine = 0.0;
  double unseen_human = 0.0;
  // Calibration: p = sigmoid(a * llr + b), a > 0.
  double a = 1.0;
  double b = 0.0;

  // Mean over the text's n-grams of (machine - human) log frequency.
  double log_likelihood_ratio(std::string_view text) const;
  double logit(std::string_view text) const {
    return a * log_likelihood_ratio(text) + b;
  }
  double probability(std::string_view text) const;
};

// Throws UsageError unless both classes are present. `order` in [1, 8].
NgramScorerModel train_ngram_scorer(std::span<const LabeledText> texts,
                                    int order = 4);

void save_ngram_model(const NgramScorerModel& model,
                      const std::filesystem::path& path);
NgramScorerModel load_ngram_model(const std::filesystem::path& path);

// Chunk representation used in feature mode. The vector is split into 8
// equal slots, one per sentence position of the chunk (sentences past the
// eighth are ignored). Each slot holds a presence flag, the sentence's
// calibrated logit and probability, its log length, the whole chunk's logit,
// and a signed hashed bag of lowercase words. `dim` must be a multiple of 8
// and at least 64.
std::vector<double> ngram_chunk_features(const NgramScorerModel& model,
                                         const Chunk& chunk, std::size_t dim);

class NgramScorer final : public ChunkScorer {
 public:
  explicit NgramScorer(NgramScorerModel model,
                       std::size_t feature_dim = kDefaultFeatureDim);

  std::string name() const override { return "ngram"; }
  bool supports(ScoreMode) const override { return true; }
  std::size_t feature_dim() const override { return feature_dim_; }
  ChunkResult score(const ChunkRequest& request) override;

  const NgramScorerModel& model() const { return model_; }

 private:
  NgramScorerModel model_;
  std::size_t feature_dim_;
};

}  // namespace mgtloc

#endif  // MGTLOC_NGRAM_SCORER_HPP_
