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

#include "mgtloc/adaloc_train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "json_util.hpp"
#include "mgtloc/article_io.hpp"
#include "mgtloc/errors.hpp"
#include "mgtloc/metrics.hpp"
#include "mgtloc/random.hpp"

namespace mgtloc {
namespace {

using detail::Json;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

AdaLocGradients zero_like(const AdaLocModel& model) {
  return {Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols()),
          Eigen::VectorXd::Zero(model.b1.size()),
          Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols()),
          Eigen::VectorXd::Zero(model.b2.size())};
}

void check_dataset(std::span<const ChunkExample> dataset, int feature_dim, int m) {
  if (dataset.empty()) throw DataError("training set is empty");
  bool positive = false;
  bool negative = false;
  for (const ChunkExample& ex : dataset) {
    if (static_cast<int>(ex.feature.size()) != feature_dim ||
        static_cast<int>(ex.targets.size()) != m ||
        static_cast<int>(ex.mask.size()) != m) {
      throw DataError("training example from '" + ex.article_id +
                      "' has inconsistent dimensions");
    }
    for (double v : ex.feature) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite feature in training example from '" +
                        ex.article_id + "'");
      }
    }
    for (int j = 0; j < m; ++j) {
      if (ex.mask[j] == 0.0) continue;
      positive = positive || ex.targets[j] == 1.0;
      negative = negative || ex.targets[j] == 0.0;
    }
  }
  if (!positive || !negative) {
    throw DataError("training set needs both machine and human targets");
  }
}

// Mean loss of one batch and its gradients, with dropout drawn from `rng`.
double batch_step(const AdaLocModel& model, std::span<const ChunkExample> dataset,
                  std::span<const std::size_t> batch, Rng& rng,
                  AdaLocGradients& grads) {
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index d = model.feature_dim();
  Eigen::MatrixXd f(d, b);
  for (Eigen::Index c = 0; c < b; ++c) {
    f.col(c) = Eigen::Map<const Eigen::VectorXd>(dataset[batch[c]].feature.data(), d);
  }
  Eigen::MatrixXd z = model.w1 * f;
  z.colwise() += model.b1;
  Eigen::MatrixXd h;
  Eigen::MatrixXd slope;
  if (model.activation == Activation::kTanh) {
    h = z.array().tanh().matrix();
    slope = (1.0 - h.array().square()).matrix();
  } else {
    h = z.cwiseMax(0.0);
    slope = (z.array() > 0.0).cast<double>().matrix();
  }
  Eigen::MatrixXd keep = Eigen::MatrixXd::Ones(h.rows(), b);
  if (model.dropout_rate > 0.0) {
    const double scale = 1.0 / (1.0 - model.dropout_rate);
    for (Eigen::Index c = 0; c < b; ++c) {
      for (Eigen::Index r = 0; r < h.rows(); ++r) {
        keep(r, c) = rng.uniform() < model.dropout_rate ? 0.0 : scale;
      }
    }
    h = h.cwiseProduct(keep);
  }
  Eigen::MatrixXd logits = model.w2 * h;
  logits.colwise() += model.b2;

  Eigen::MatrixXd delta(model.m, b);
  double loss = 0.0;
  std::vector<double> probs(static_cast<std::size_t>(model.m));
  for (Eigen::Index c = 0; c < b; ++c) {
    for (int j = 0; j < model.m; ++j) probs[j] = sigmoid(logits(j, c));
    const ChunkExample& ex = dataset[batch[c]];
    const BceResult bce = bce_loss(probs, ex.targets, ex.mask);
    loss += bce.loss;
    for (int j = 0; j < model.m; ++j) delta(j, c) = bce.grad_logits[j] / b;
  }
  grads.w2.noalias() = delta * h.transpose();
  grads.b2 = delta.rowwise().sum();
  Eigen::MatrixXd dz = (model.w2.transpose() * delta).cwiseProduct(keep);
  dz = dz.cwiseProduct(slope);
  grads.w1.noalias() = dz * f.transpose();
  grads.b1 = dz.rowwise().sum();
  return loss / static_cast<double>(b);
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning rate must be finite and non-negative");
  }
  if (batch_size < 1) throw UsageError("batch size must be at least 1");
  if (max_epochs < 1) throw UsageError("epochs must be at least 1");
  if (patience < 1) throw UsageError("patience must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw UsageError("Adam betas must be in [0,1)");
  }
  if (!(epsilon > 0.0)) throw UsageError("Adam epsilon must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw UsageError("dropout rate must be in [0,1)");
  }
  if (hidden_dim < 1) throw UsageError("hidden dimension must be positive");
}

AdamOptimizer::AdamOptimizer(const AdaLocModel& shape, const TrainConfig& config)
    : lr_(config.learning_rate),
      beta1_(config.beta1),
      beta2_(config.beta2),
      epsilon_(config.epsilon),
      m_(zero_like(shape)),
      v_(zero_like(shape)) {}

template <typename T>
void AdamOptimizer::update(T& param, const T& grad, T& m, T& v) const {
  m = beta1_ * m + (1.0 - beta1_) * grad;
  v = beta2_ * v + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double step = lr_ / correction1_;
  param.array() -=
      step * m.array() / ((v.array() / correction2_).sqrt() + epsilon_);
}

void AdamOptimizer::step(AdaLocModel& model, const AdaLocGradients& g) {
  ++t_;
  correction1_ = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  correction2_ = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  update(model.w1, g.w1, m_.w1, v_.w1);
  update(model.b1, g.b1, m_.b1, v_.b1);
  update(model.w2, g.w2, m_.w2, v_.w2);
  update(model.b2, g.b2, m_.b2, v_.b2);
}

std::vector<ChunkExample> build_chunk_examples(std::span<const Article> articles,
                                               ChunkScorer& feature_scorer, int m,
                                               int stride) {
  std::vector<ChunkExample> examples;
  for (const Article& article : articles) {
    if (!article.labels) {
      throw DataError("training article '" + article.id + "' has no labels");
    }
    if (article.sentences.empty()) continue;
    const WindowPlan plan = plan_windows(article.sentence_count(), m, stride);
    std::vector<std::vector<double>> features =
        feature_windows(article, feature_scorer, plan);
    for (std::size_t w = 0; w < plan.windows.size(); ++w) {
      const Window& window = plan.windows[w];
      ChunkExample ex;
      ex.feature = std::move(features[w]);
      ex.targets.assign(static_cast<std::size_t>(m), 0.0);
      ex.mask.assign(static_cast<std::size_t>(m), 0.0);
      for (int k = 0; k < window.size(); ++k) {
        ex.targets[k] = (*article.labels)[window.first + k];
        ex.mask[k] = 1.0;
      }
      ex.article_id = article.id;
      ex.first_sentence = window.first;
      examples.push_back(std::move(ex));
    }
  }
  return examples;
}

ValidationSet prepare_validation(std::span<const Article> articles,
                                 ChunkScorer& feature_scorer, int m) {
  ValidationSet v;
  v.m = m;
  v.articles.assign(articles.begin(), articles.end());
  for (const Article& a : v.articles) {
    if (!a.labels) throw DataError("validation article '" + a.id + "' has no labels");
    if (a.sentences.empty()) {
      throw DataError("validation article '" + a.id + "' has no sentences");
    }
    v.features.push_back(
        feature_windows(a, feature_scorer, plan_windows(a.sentence_count(), m, 1)));
  }
  return v;
}

double validation_map(const AdaLocModel& model, const ValidationSet& validation,
                      const LocalizeOptions& options) {
  if (model.m != validation.m) {
    throw UsageError("model m does not match the validation windows");
  }
  std::vector<LocalizationResult> results;
  results.reserve(validation.articles.size());
  for (std::size_t i = 0; i < validation.articles.size(); ++i) {
    const Article& a = validation.articles[i];
    const WindowPlan plan = plan_windows(a.sentence_count(), model.m, 1);
    std::vector<std::vector<double>> probs;
    probs.reserve(plan.windows.size());
    for (const auto& feature : validation.features[i]) {
      probs.push_back(adaloc_forward(model, feature));
    }
    LocalizationResult r;
    r.article_id = a.id;
    r.strategy = Strategy::kAdalocVote;
    r.m = model.m;
    r.predictions = aggregate_position_outputs(a.sentence_count(), plan, probs,
                                               Aggregation::kVote, options);
    results.push_back(std::move(r));
  }
  return evaluate(validation.articles, results).map_mean;
}

TrainResult train(std::span<const ChunkExample> dataset,
                  const ValidationSet* validation, const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw DataError("training set is empty");
  const int m = static_cast<int>(dataset.front().targets.size());
  const int feature_dim = static_cast<int>(dataset.front().feature.size());
  if (m < 1 || feature_dim < 1) throw DataError("training examples are empty");
  check_dataset(dataset, feature_dim, m);
  if (validation != nullptr && validation->m != m) {
    throw UsageError("validation windows use m=" + std::to_string(validation->m) +
                     " but training examples have m=" + std::to_string(m));
  }

  AdaLocShape shape{feature_dim, config.hidden_dim, config.dropout_rate,
                    config.activation};
  AdaLocModel model = init_weights(m, derive_seed(config.seed, "adaloc-init"), shape);
  AdamOptimizer optimizer(model, config);
  Rng order_rng(derive_seed(config.seed, "adaloc-order"));
  Rng dropout_rng(derive_seed(config.seed, "adaloc-dropout"));
  AdaLocGradients grads = zero_like(model);

  TrainResult result{model, {}};
  double best_map = -1.0;
  int stale = 0;
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t count = std::min(batch, order.size() - start);
      const std::span<const std::size_t> ids(order.data() + start, count);
      const double loss = batch_step(model, dataset, ids, dropout_rng, grads);
      if (!std::isfinite(loss)) {
        throw DataError("non-finite training loss in epoch " + std::to_string(epoch) +
                        " at example " + std::to_string(start) + " (article '" +
                        dataset[ids.front()].article_id + "')");
      }
      loss_sum += loss * static_cast<double>(count);
      optimizer.step(model, grads);
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(dataset.size());
    record.val_map = validation ? validation_map(model, *validation) : 0.0;
    result.log.epochs.push_back(record);
    spdlog::info("epoch {}: train loss {:.6f}, validation mAP {:.4f}", epoch,
                 record.train_loss, record.val_map);

    if (validation == nullptr) {
      result.model = model;
      result.log.best_epoch = epoch;
      continue;
    }
    if (record.val_map > best_map) {
      best_map = record.val_map;
      result.model = model;
      result.log.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= config.patience) {
      result.log.stopped_early = epoch < config.max_epochs;
      break;
    }
  }
  return result;
}

std::string TrainingLog::to_json() const {
  Json j;
  Json list = Json::array();
  for (const EpochRecord& e : epochs) {
    list.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss},
                    {"val_map", e.val_map}});
  }
  j["epochs"] = std::move(list);
  j["best_epoch"] = best_epoch;
  j["stopped_early"] = stopped_early;
  return j.dump(2);
}

std::string encode_chunk_example(const ChunkExample& example) {
  Json j;
  j["article_id"] = example.article_id;
  j["first"] = example.first_sentence;
  j["feature"] = example.feature;
  j["targets"] = example.targets;
  j["mask"] = example.mask;
  return detail::dump_line(j);
}

std::vector<ChunkExample> read_chunk_examples(const std::filesystem::path& path) {
  std::vector<ChunkExample> examples;
  for_each_line(path, [&](std::string_view line, int number) {
    const std::string what = path.string() + ":" + std::to_string(number);
    const Json j = detail::parse_json(line, what);
    ChunkExample ex;
    ex.article_id = detail::require_as<std::string>(j, "article_id", what);
    ex.first_sentence = detail::require_as<int>(j, "first", what);
    ex.feature = detail::require_as<std::vector<double>>(j, "feature", what);
    ex.targets = detail::require_as<std::vector<double>>(j, "targets", what);
    ex.mask = detail::require_as<std::vector<double>>(j, "mask", what);
    if (ex.targets.size() != ex.mask.size() || ex.targets.empty()) {
      throw DataError(what + ": targets and mask must be non-empty and equal in length");
    }
    if (!examples.empty() &&
        (ex.feature.size() != examples.front().feature.size() ||
         ex.targets.size() != examples.front().targets.size())) {
      throw DataError(what + ": example shape differs from the first example");
    }
    examples.push_back(std::move(ex));
  });
  return examples;
}

}  // namespace mgtloc
