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

#include "mgtloc/ngram_scorer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "mgtloc/errors.hpp"
#include "mgtloc/random.hpp"
#include "mgtloc/segmenter.hpp"

namespace mgtloc {
namespace {

constexpr int kFeatureSlots = 8;
constexpr int kFixedSlotFeatures = 5;
constexpr double kLogitClip = 8.0;
constexpr int kFormatVersion = 1;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <typename Fn>
void for_each_ngram(std::string_view text, int order, Fn&& fn) {
  const auto n = static_cast<std::size_t>(order);
  if (text.size() < n) return;
  std::uint64_t key = 0;
  const std::uint64_t mask =
      n >= 8 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (8 * n)) - 1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    key = ((key << 8) | static_cast<unsigned char>(text[i])) & mask;
    if (i + 1 >= n) fn(key);
  }
}

// Penalized logistic regression of y on x, prior (a, b) ~ (1, 0).
std::pair<double, double> fit_calibration(std::span<const double> x,
                                          std::span<const int> y) {
  constexpr double kPrior = 1.0;
  double a = 1.0;
  double b = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    double ga = kPrior * (a - 1.0);
    double gb = kPrior * b;
    double haa = kPrior;
    double hab = 0.0;
    double hbb = kPrior;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = sigmoid(a * x[i] + b);
      const double r = p - y[i];
      const double w = p * (1.0 - p);
      ga += r * x[i];
      gb += r;
      haa += w * x[i] * x[i];
      hab += w * x[i];
      hbb += w;
    }
    const double det = haa * hbb - hab * hab;
    if (!(det > 0.0)) break;
    const double da = (hbb * ga - hab * gb) / det;
    const double db = (haa * gb - hab * ga) / det;
    a -= da;
    b -= db;
    if (std::abs(da) + std::abs(db) < 1e-12) break;
  }
  return {std::max(a, 1e-6), b};
}

std::string normalize_word(std::string_view token) {
  std::string word;
  for (char c : token) {
    if (std::isalnum(static_cast<unsigned char>(c)) ||
        static_cast<unsigned char>(c) >= 0x80) {
      word.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return word;
}

std::vector<std::string_view> split_sentences(const Chunk& chunk,
                                              std::vector<std::string>& store) {
  std::vector<std::string_view> out;
  const std::string_view text = chunk.text;
  if (chunk.source && !chunk.source->sentence_offsets.empty()) {
    const auto& offsets = chunk.source->sentence_offsets;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      const std::size_t begin = offsets[i];
      std::size_t end = i + 1 < offsets.size() ? offsets[i + 1] : text.size();
      while (end > begin && text[end - 1] == ' ') --end;
      out.push_back(text.substr(begin, end - begin));
    }
    return out;
  }
  for (const Sentence& s : segment(text)) store.push_back(s.text);
  for (const std::string& s : store) out.emplace_back(s);
  return out;
}

}  // namespace

double NgramScorerModel::log_likelihood_ratio(std::string_view text) const {
  double sum = 0.0;
  std::size_t count = 0;
  for_each_ngram(text, order, [&](std::uint64_t key) {
    const auto it = log_freq.find(key);
    if (it == log_freq.end()) {
      sum += unseen_machine - unseen_human;
    } else {
      sum += it->second.machine - it->second.human;
    }
    ++count;
  });
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double NgramScorerModel::probability(std::string_view text) const {
  return sigmoid(logit(text));
}

NgramScorerModel train_ngram_scorer(std::span<const LabeledText> texts,
                                    int order) {
  if (order < 1 || order > 8) {
    throw UsageError("n-gram order must be in [1,8], got " +
                     std::to_string(order));
  }
  std::unordered_map<std::uint64_t, std::pair<double, double>> counts;
  double total_machine = 0.0;
  double total_human = 0.0;
  std::size_t n_machine = 0;
  std::size_t n_human = 0;
  for (const LabeledText& t : texts) {
    if (t.label != kHuman && t.label != kMachine) {
      throw UsageError("training label must be 0 or 1");
    }
    const bool machine = t.label == kMachine;
    (machine ? n_machine : n_human)++;
    for_each_ngram(t.text, order, [&](std::uint64_t key) {
      auto& c = counts[key];
      (machine ? c.first : c.second) += 1.0;
      (machine ? total_machine : total_human) += 1.0;
    });
  }
  if (n_machine == 0 || n_human == 0) {
    throw UsageError(
        "n-gram scorer training needs both machine and human texts");
  }

  NgramScorerModel model;
  model.order = order;
  const double vocab = static_cast<double>(counts.size()) + 1.0;
  const double log_denom_m = std::log(total_machine + vocab);
  const double log_denom_h = std::log(total_human + vocab);
  model.unseen_machine = -log_denom_m;
  model.unseen_human = -log_denom_h;
  model.log_freq.reserve(counts.size());
  for (const auto& [key, c] : counts) {
    model.log_freq.emplace(
        key, NgramScorerModel::LogFreq{std::log(c.first + 1.0) - log_denom_m,
                                       std::log(c.second + 1.0) - log_denom_h});
  }

  std::vector<double> x;
  std::vector<int> y;
  x.reserve(texts.size());
  y.reserve(texts.size());
  for (const LabeledText& t : texts) {
    x.push_back(model.log_likelihood_ratio(t.text));
    y.push_back(t.label);
  }
  std::tie(model.a, model.b) = fit_calibration(x, y);
  return model;
}

void save_ngram_model(const NgramScorerModel& model,
                      const std::filesystem::path& path) {
  detail::Json j;
  j["format"] = "mgtloc-ngram";
  j["version"] = kFormatVersion;
  j["order"] = model.order;
  j["a"] = model.a;
  j["b"] = model.b;
  j["unseen_machine"] = model.unseen_machine;
  j["unseen_human"] = model.unseen_human;
  std::vector<std::uint64_t> keys;
  keys.reserve(model.log_freq.size());
  for (const auto& [key, _] : model.log_freq) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  detail::Json table = detail::Json::array();
  for (std::uint64_t key : keys) {
    const auto& f = model.log_freq.at(key);
    table.push_back(detail::Json::array({key, f.machine, f.human}));
  }
  j["table"] = std::move(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << detail::dump_line(j) << '\n';
}

NgramScorerModel load_ngram_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open n-gram model " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string what = "n-gram model " + path.string();
  const detail::Json j = detail::parse_json(buffer.str(), what);
  if (detail::require_as<std::string>(j, "format", what) != "mgtloc-ngram" ||
      detail::require_as<int>(j, "version", what) != kFormatVersion) {
    throw DataError(what + ": unsupported format or version");
  }
  NgramScorerModel model;
  model.order = detail::require_as<int>(j, "order", what);
  model.a = detail::require_as<double>(j, "a", what);
  model.b = detail::require_as<double>(j, "b", what);
  model.unseen_machine = detail::require_as<double>(j, "unseen_machine", what);
  model.unseen_human = detail::require_as<double>(j, "unseen_human", what);
  if (model.order < 1 || model.order > 8 || !(model.a > 0.0)) {
    throw DataError(what + ": invalid order or calibration");
  }
  for (const detail::Json& row : detail::require(j, "table", what)) {
    if (!row.is_array() || row.size() != 3) {
      throw DataError(what + ": malformed table row");
    }
    model.log_freq.emplace(
        detail::get_as<std::uint64_t>(row[0], "table", what),
        NgramScorerModel::LogFreq{detail::get_as<double>(row[1], "table", what),
                                  detail::get_as<double>(row[2], "table", what)});
  }
  return model;
}

std::vector<double> ngram_chunk_features(const NgramScorerModel& model,
                                         const Chunk& chunk, std::size_t dim) {
  if (dim % kFeatureSlots != 0 || dim < 64) {
    throw UsageError("n-gram feature dimension must be a multiple of 8 and "
                     "at least 64, got " + std::to_string(dim));
  }
  const std::size_t width = dim / kFeatureSlots;
  const std::size_t hash_width = width - kFixedSlotFeatures;
  std::vector<double> feature(dim, 0.0);

  const double chunk_logit =
      std::clamp(model.logit(chunk.text), -kLogitClip, kLogitClip);
  std::vector<std::string> store;
  const auto sentences = split_sentences(chunk, store);
  for (std::size_t j = 0; j < sentences.size() && j < kFeatureSlots; ++j) {
    const std::string_view s = sentences[j];
    double* slot = feature.data() + j * width;
    const double logit = std::clamp(model.logit(s), -kLogitClip, kLogitClip);
    const int tokens = count_tokens(s);
    slot[0] = 1.0;
    slot[1] = logit / 4.0;
    slot[2] = 2.0 * sigmoid(logit) - 1.0;
    slot[3] = std::log1p(static_cast<double>(tokens)) / 4.0;
    slot[4] = chunk_logit / 4.0;

    std::istringstream words{std::string(s)};
    std::string token;
    while (words >> token) {
      const std::string w = normalize_word(token);
      if (w.empty()) continue;
      const std::uint64_t h = fnv1a(w);
      const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
      slot[kFixedSlotFeatures + (h % hash_width)] += sign;
    }
    const double scale = 1.0 / std::sqrt(std::max(1, tokens));
    for (std::size_t k = kFixedSlotFeatures; k < width; ++k) slot[k] *= scale;
  }
  return feature;
}

NgramScorer::NgramScorer(NgramScorerModel model, std::size_t feature_dim)
    : model_(std::move(model)), feature_dim_(feature_dim) {}

ChunkResult NgramScorer::score(const ChunkRequest& request) {
  ChunkResult result;
  for (const Chunk& chunk : request.chunks) {
    if (request.mode == ScoreMode::kScore) {
      result.scores.push_back(model_.probability(chunk.text));
    } else {
      result.features.push_back(
          ngram_chunk_features(model_, chunk, feature_dim_));
    }
  }
  return result;
}

}  // namespace mgtloc
