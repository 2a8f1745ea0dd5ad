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

#ifndef MGTLOC_ADALOC_TRAIN_HPP_
#define MGTLOC_ADALOC_TRAIN_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mgtloc/adaloc.hpp"
#include "mgtloc/localizer.hpp"
#include "mgtloc/scorers.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc {

struct TrainConfig {
  double learning_rate = 1e-5;
  int batch_size = 16;
  int max_epochs = 3;
  // Epochs without a validation mAP improvement before stopping.
  int patience = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double dropout_rate = 0.1;
  std::uint64_t seed = 0;
  int hidden_dim = kDefaultFeatureDim;
  Activation activation = Activation::kRelu;

  // Throws UsageError for out-of-range values.
  void validate() const;
};

// Adam with bias correction over all four parameter blocks.
class AdamOptimizer {
 public:
  AdamOptimizer(const AdaLocModel& shape, const TrainConfig& config);
  void step(AdaLocModel& model, const AdaLocGradients& gradients);

 private:
  template <typename T>
  void update(T& param, const T& grad, T& m, T& v) const;

  double lr_;
  double beta1_;
  double beta2_;
  double epsilon_;
  long t_ = 0;
  double correction1_ = 1.0;
  double correction2_ = 1.0;
  AdaLocGradients m_;
  AdaLocGradients v_;
};

// Training examples for every window of plan_windows(n, m, stride), with
// targets from the article labels and short windows masked.
std::vector<ChunkExample> build_chunk_examples(std::span<const Article> articles,
                                               ChunkScorer& feature_scorer, int m,
                                               int stride = 1);

// Labelled articles with their step-1 window features extracted once, so
// validation after each epoch does not call the scorer again.
struct ValidationSet {
  int m = 1;
  std::vector<Article> articles;
  std::vector<std::vector<std::vector<double>>> features;  // [article][window]
};

ValidationSet prepare_validation(std::span<const Article> articles,
                                 ChunkScorer& feature_scorer, int m);

// mAP of AdaLoc with vote aggregation over the validation set.
double validation_map(const AdaLocModel& model, const ValidationSet& validation,
                      const LocalizeOptions& options = {});

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_map = 0.0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  bool stopped_early = false;

  std::string to_json() const;
};

struct TrainResult {
  AdaLocModel model;  // best-validation checkpoint
  TrainingLog log;
};

// Mini-batch Adam on the mean BCE. Without a validation set the last epoch's
// model is returned. Throws DataError for an empty or single-class dataset,
// non-finite features, or a non-finite loss (with the batch and article).
TrainResult train(std::span<const ChunkExample> dataset,
                  const ValidationSet* validation, const TrainConfig& config);

// Training feature file: one ChunkExample per line,
//   {"article_id", "first", "feature": [...], "targets": [...], "mask": [...]}
std::string encode_chunk_example(const ChunkExample& example);
std::vector<ChunkExample> read_chunk_examples(const std::filesystem::path& path);

}  // namespace mgtloc

#endif  // MGTLOC_ADALOC_TRAIN_HPP_
