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

#ifndef MGTLOC_ADALOC_HPP_
#define MGTLOC_ADALOC_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mgtloc/random.hpp"
#include "mgtloc/scorers.hpp"

namespace mgtloc {

enum class Activation { kRelu, kTanh };

std::string activation_name(Activation activation);
Activation parse_activation(std::string_view name);

// Two dense layers over a frozen chunk feature:
//   p = sigmoid(W2 * dropout(act(W1 * f + b1)) + b2)
// with one output per sentence position of the window. Parameters are held
// in double precision.
struct AdaLocModel {
  int m = 3;
  double dropout_rate = 0.1;
  Activation activation = Activation::kRelu;
  Eigen::MatrixXd w1;  // hidden x feature
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd w2;  // m x hidden
  Eigen::VectorXd b2;  // m

  int feature_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }

  // All parameters zero.
  static AdaLocModel zeros(int m, int feature_dim = kDefaultFeatureDim,
                           int hidden_dim = kDefaultFeatureDim,
                           double dropout_rate = 0.1,
                           Activation activation = Activation::kRelu);

  friend bool operator==(const AdaLocModel&, const AdaLocModel&);
};

struct AdaLocShape {
  int feature_dim = kDefaultFeatureDim;
  int hidden_dim = kDefaultFeatureDim;
  double dropout_rate = 0.1;
  Activation activation = Activation::kRelu;
};

// Glorot-uniform weights, U(-s, s) with s = sqrt(6 / (fan_in + fan_out));
// zero biases.
AdaLocModel init_weights(int m, std::uint64_t seed, const AdaLocShape& shape = {});

// Hand-built model that reads the OracleScorer feature layout (label of
// window position j at feature index j) and reproduces it with saturated
// probabilities. Used for end-to-end checks of the AdaLoc code paths.
AdaLocModel make_oracle_model(int m, int feature_dim = kDefaultFeatureDim);

// One window's probabilities. In training mode dropout with inverted scaling
// is applied using `rng`, which must then be non-null. Throws DataError for
// non-finite input and UsageError for a dimension mismatch.
std::vector<double> adaloc_forward(const AdaLocModel& model,
                                   std::span<const double> feature,
                                   bool training = false, Rng* rng = nullptr);

inline constexpr double kProbabilityClamp = 1e-7;

struct BceResult {
  double loss = 0.0;
  // d(loss)/d(logit) for every position; zero where masked.
  std::vector<double> grad_logits;
  int count = 0;  // unmasked positions
};

// Mean binary cross-entropy over unmasked positions with probabilities
// clamped to [1e-7, 1 - 1e-7]. The gradient with respect to the pre-sigmoid
// logits is (p - t) / count. An all-masked example gives zero loss and
// gradient.
BceResult bce_loss(std::span<const double> probs, std::span<const double> targets,
                   std::span<const double> mask);

// Per-window training example: the chunk feature and per-position targets.
// Positions past the end of a short window are masked out.
struct ChunkExample {
  std::vector<double> feature;
  std::vector<double> targets;
  std::vector<double> mask;
  std::string article_id;
  int first_sentence = 0;
};

struct AdaLocGradients {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

// Loss and parameter gradients of one example without dropout.
double loss_and_gradients(const AdaLocModel& model, const ChunkExample& example,
                          AdaLocGradients* gradients);

// Binary model file: magic, version, shape, dropout, activation, then the
// parameters as little-endian doubles and an FNV-1a checksum.
void save_model(const AdaLocModel& model, const std::filesystem::path& path);

// Throws DataError for truncated/corrupt files, unknown versions, and (when
// `expected_feature_dim` is set) a feature dimension mismatch.
AdaLocModel load_model(const std::filesystem::path& path,
                       std::optional<int> expected_feature_dim = std::nullopt);

}  // namespace mgtloc

#endif  // MGTLOC_ADALOC_HPP_
