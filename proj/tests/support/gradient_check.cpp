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

#include "gradient_check.hpp"

#include <algorithm>
#include <cmath>

#include "mgtloc/random.hpp"

namespace mgtloc::testing {
namespace {

// Plain-loop loss, kept apart from the library forward pass.
double reference_loss(const AdaLocModel& model, const ChunkExample& ex) {
  const int hidden = model.hidden_dim();
  std::vector<double> h(static_cast<std::size_t>(hidden));
  for (int i = 0; i < hidden; ++i) {
    double z = model.b1(i);
    for (int j = 0; j < model.feature_dim(); ++j) {
      z += model.w1(i, j) * ex.feature[static_cast<std::size_t>(j)];
    }
    h[static_cast<std::size_t>(i)] =
        model.activation == Activation::kRelu ? std::max(0.0, z) : std::tanh(z);
  }
  double loss = 0.0;
  double count = 0.0;
  for (int k = 0; k < model.m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (ex.mask[kk] == 0.0) continue;
    double z = model.b2(k);
    for (int i = 0; i < hidden; ++i) z += model.w2(k, i) * h[static_cast<std::size_t>(i)];
    double p = 1.0 / (1.0 + std::exp(-z));
    p = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
    loss -= ex.targets[kk] * std::log(p) + (1.0 - ex.targets[kk]) * std::log(1.0 - p);
    count += 1.0;
  }
  return count > 0.0 ? loss / count : 0.0;
}

template <typename Param, typename Grad>
double check_block(AdaLocModel& model, Param& param, const Grad& analytic,
                   const ChunkExample& ex, double h) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < param.size(); ++i) {
    const double saved = param.data()[i];
    param.data()[i] = saved + h;
    const double up = reference_loss(model, ex);
    param.data()[i] = saved - h;
    const double down = reference_loss(model, ex);
    param.data()[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic.data()[i];
    const double denom = std::max(std::abs(a) + std::abs(numeric), 1e-8);
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

}  // namespace

double max_gradient_relative_error(const AdaLocModel& model,
                                   const ChunkExample& example, double h) {
  AdaLocGradients g;
  loss_and_gradients(model, example, &g);
  AdaLocModel work = model;
  double worst = 0.0;
  worst = std::max(worst, check_block(work, work.w1, g.w1, example, h));
  worst = std::max(worst, check_block(work, work.b1, g.b1, example, h));
  worst = std::max(worst, check_block(work, work.w2, g.w2, example, h));
  worst = std::max(worst, check_block(work, work.b2, g.b2, example, h));
  return worst;
}

GradientCase random_gradient_case(int m, int feature_dim, int hidden_dim, int valid,
                                  Activation activation, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "gradient-case"));
  GradientCase c;
  c.model = init_weights(m, seed, {feature_dim, hidden_dim, 0.1, activation});
  for (Eigen::Index i = 0; i < c.model.b1.size(); ++i) c.model.b1(i) = rng.uniform() - 0.5;
  for (Eigen::Index i = 0; i < c.model.b2.size(); ++i) c.model.b2(i) = rng.uniform() - 0.5;
  for (int j = 0; j < feature_dim; ++j) c.example.feature.push_back(2.0 * rng.uniform() - 1.0);
  for (int k = 0; k < m; ++k) {
    c.example.targets.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
    c.example.mask.push_back(k < valid ? 1.0 : 0.0);
  }
  return c;
}

}  // namespace mgtloc::testing
