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

#include "mgtloc/localizer.hpp"

#include <algorithm>

#include "json_util.hpp"
#include "mgtloc/article_io.hpp"
#include "mgtloc/errors.hpp"

namespace mgtloc {
namespace {

ChunkRequest window_request(const Article& article, const WindowPlan& plan,
                            ScoreMode mode) {
  ChunkRequest request;
  request.request_id = article.id + "#m" + std::to_string(plan.m) + "s" +
                       std::to_string(plan.step);
  request.mode = mode;
  request.chunks.reserve(plan.windows.size());
  for (const Window& w : plan.windows) {
    request.chunks.push_back(make_chunk(article, w.first, w.last));
  }
  return request;
}

template <typename Fn>
auto with_article_context(const Article& article, Fn&& fn) {
  try {
    return fn();
  } catch (const TransportError& e) {
    throw TransportError("article '" + article.id + "': " + e.what());
  } catch (const ProtocolError& e) {
    throw ProtocolError("article '" + article.id + "': " + e.what());
  } catch (const DataError& e) {
    throw DataError("article '" + article.id + "': " + e.what());
  }
}

SentencePrediction single_vote(int idx, double prob, const LocalizeOptions& o) {
  SentencePrediction p;
  p.sentence_idx = idx;
  p.score = prob;
  p.label = prob >= o.threshold ? kMachine : kHuman;
  p.votes = {p.label};
  return p;
}

}  // namespace

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kSingle:
      return "single";
    case Strategy::kVote:
      return "vote";
    case Strategy::kAdalocVote:
      return "adaloc_vote";
    case Strategy::kAdalocSkip:
      return "adaloc_skip";
    case Strategy::kAdalocMiddle:
      return "adaloc_middle";
  }
  return "single";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kSingle, Strategy::kVote, Strategy::kAdalocVote,
                     Strategy::kAdalocSkip, Strategy::kAdalocMiddle}) {
    if (strategy_name(s) == name) return s;
  }
  throw DataError("unknown strategy '" + std::string(name) + "'");
}

std::string_view aggregation_name(Aggregation aggregation) {
  switch (aggregation) {
    case Aggregation::kVote:
      return "vote";
    case Aggregation::kSkip:
      return "skip";
    case Aggregation::kMiddle:
      return "middle";
  }
  return "vote";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "vote") return Aggregation::kVote;
  if (name == "skip") return Aggregation::kSkip;
  if (name == "middle") return Aggregation::kMiddle;
  throw UsageError("unknown aggregation '" + std::string(name) +
                   "' (expected vote, skip or middle)");
}

Strategy adaloc_strategy(Aggregation aggregation) {
  switch (aggregation) {
    case Aggregation::kVote:
      return Strategy::kAdalocVote;
    case Aggregation::kSkip:
      return Strategy::kAdalocSkip;
    case Aggregation::kMiddle:
      return Strategy::kAdalocMiddle;
  }
  return Strategy::kAdalocVote;
}

WindowPlan plan_windows(int n_sentences, int m, int step) {
  if (m < 1) throw UsageError("window size m must be >= 1, got " + std::to_string(m));
  if (step < 1 || step > m) {
    throw UsageError("window step must be in [1, m], got " + std::to_string(step));
  }
  if (n_sentences < 1) throw UsageError("cannot plan windows over 0 sentences");
  WindowPlan plan;
  plan.m = m;
  plan.step = step;
  if (n_sentences <= m) {
    plan.windows.push_back({0, n_sentences - 1});
    return plan;
  }
  if (step == 1) {
    for (int i = 0; i + m <= n_sentences; ++i) {
      plan.windows.push_back({i, i + m - 1});
    }
    return plan;
  }
  for (int i = 0; i < n_sentences; i += step) {
    plan.windows.push_back({i, std::min(i + m, n_sentences) - 1});
  }
  return plan;
}

int aggregation_step(Aggregation aggregation, int m) {
  return aggregation == Aggregation::kSkip ? m : 1;
}

int resolve_votes(std::span<const int> votes, double mean_score,
                  const LocalizeOptions& options) {
  if (options.vote_rule == VoteRule::kMeanScore || votes.empty()) {
    return mean_score >= options.threshold ? kMachine : kHuman;
  }
  const auto ones = std::count(votes.begin(), votes.end(), kMachine);
  const auto total = static_cast<std::ptrdiff_t>(votes.size());
  if (2 * ones > total) return kMachine;
  if (2 * ones < total) return kHuman;
  return mean_score >= options.threshold ? kMachine : kHuman;
}

std::vector<SentencePrediction> aggregate_window_scores(
    int n_sentences, const WindowPlan& plan, std::span<const double> window_scores,
    const LocalizeOptions& options) {
  if (window_scores.size() != plan.windows.size()) {
    throw UsageError("one score per window expected");
  }
  std::vector<SentencePrediction> out(static_cast<std::size_t>(n_sentences));
  std::vector<double> sums(out.size(), 0.0);
  for (std::size_t w = 0; w < plan.windows.size(); ++w) {
    const int label = window_scores[w] >= options.threshold ? kMachine : kHuman;
    for (int j = plan.windows[w].first; j <= plan.windows[w].last; ++j) {
      const auto k = static_cast<std::size_t>(j);
      out[k].votes.push_back(label);
      sums[k] += window_scores[w];
    }
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    SentencePrediction& p = out[j];
    p.sentence_idx = static_cast<int>(j);
    p.score = sums[j] / static_cast<double>(p.votes.size());
    p.label = resolve_votes(p.votes, p.score, options);
  }
  return out;
}

std::vector<SentencePrediction> aggregate_position_outputs(
    int n_sentences, const WindowPlan& plan,
    const std::vector<std::vector<double>>& window_probs,
    Aggregation aggregation, const LocalizeOptions& options) {
  if (window_probs.size() != plan.windows.size()) {
    throw UsageError("one output vector per window expected");
  }
  for (std::size_t w = 0; w < plan.windows.size(); ++w) {
    if (static_cast<int>(window_probs[w].size()) < plan.windows[w].size()) {
      throw UsageError("window output shorter than the window");
    }
  }
  const auto n = static_cast<std::size_t>(n_sentences);
  std::vector<SentencePrediction> out(n);

  if (aggregation == Aggregation::kVote) {
    std::vector<double> sums(n, 0.0);
    for (std::size_t w = 0; w < plan.windows.size(); ++w) {
      const Window& win = plan.windows[w];
      for (int j = win.first; j <= win.last; ++j) {
        const double prob = window_probs[w][static_cast<std::size_t>(j - win.first)];
        const auto k = static_cast<std::size_t>(j);
        out[k].votes.push_back(prob >= options.threshold ? kMachine : kHuman);
        sums[k] += prob;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      SentencePrediction& p = out[j];
      p.sentence_idx = static_cast<int>(j);
      p.score = sums[j] / static_cast<double>(p.votes.size());
      p.label = resolve_votes(p.votes, p.score, options);
    }
    return out;
  }

  if (aggregation == Aggregation::kSkip) {
    for (std::size_t w = 0; w < plan.windows.size(); ++w) {
      const Window& win = plan.windows[w];
      for (int j = win.first; j <= win.last; ++j) {
        out[static_cast<std::size_t>(j)] = single_vote(
            j, window_probs[w][static_cast<std::size_t>(j - win.first)], options);
      }
    }
    return out;
  }

  // Middle: each window labels its centre sentence; sentences before the
  // first centre or after the last one use the nearest window's own position.
  const int centre = plan.m / 2;
  std::vector<bool> assigned(n, false);
  for (std::size_t w = 0; w < plan.windows.size(); ++w) {
    const Window& win = plan.windows[w];
    const int j = win.first + centre;
    if (j > win.last) continue;
    out[static_cast<std::size_t>(j)] =
        single_vote(j, window_probs[w][static_cast<std::size_t>(centre)], options);
    assigned[static_cast<std::size_t>(j)] = true;
  }
  const Window& front = plan.windows.front();
  const Window& back = plan.windows.back();
  for (int j = 0; j < n_sentences; ++j) {
    if (assigned[static_cast<std::size_t>(j)]) continue;
    const bool leading = j < front.first + centre;
    const std::size_t w = leading ? 0 : plan.windows.size() - 1;
    const Window& win = leading ? front : back;
    out[static_cast<std::size_t>(j)] = single_vote(
        j, window_probs[w][static_cast<std::size_t>(j - win.first)], options);
  }
  return out;
}

std::vector<double> score_windows(const Article& article, ChunkScorer& scorer,
                                  const WindowPlan& plan) {
  return with_article_context(article, [&] {
    return score_chunks(scorer, window_request(article, plan, ScoreMode::kScore))
        .scores;
  });
}

std::vector<std::vector<double>> feature_windows(const Article& article,
                                                 ChunkScorer& scorer,
                                                 const WindowPlan& plan) {
  return with_article_context(article, [&] {
    return score_chunks(scorer,
                        window_request(article, plan, ScoreMode::kFeature))
        .features;
  });
}

LocalizationResult localize_single(const Article& article, ChunkScorer& scorer,
                                   const LocalizeOptions& options) {
  LocalizationResult result = localize_vote(article, scorer, 1, options);
  result.strategy = Strategy::kSingle;
  return result;
}

LocalizationResult localize_vote(const Article& article, ChunkScorer& scorer,
                                 int m, const LocalizeOptions& options) {
  if (m < 1) throw UsageError("window size m must be >= 1, got " + std::to_string(m));
  LocalizationResult result{article.id, Strategy::kVote, m, {}};
  const int n = article.sentence_count();
  if (n == 0) return result;
  const WindowPlan plan = plan_windows(n, m, 1);
  const std::vector<double> scores = score_windows(article, scorer, plan);
  result.predictions = aggregate_window_scores(n, plan, scores, options);
  return result;
}

LocalizationResult localize_adaloc(const Article& article,
                                   ChunkScorer& feature_scorer,
                                   const AdaLocModel& model, int m,
                                   Aggregation aggregation,
                                   const LocalizeOptions& options) {
  if (model.m != m) {
    throw UsageError("AdaLoc model has m=" + std::to_string(model.m) +
                     " but m=" + std::to_string(m) + " was requested");
  }
  if (static_cast<int>(feature_scorer.feature_dim()) != model.feature_dim()) {
    throw UsageError("scorer feature_dim " +
                     std::to_string(feature_scorer.feature_dim()) +
                     " does not match AdaLoc feature_dim " +
                     std::to_string(model.feature_dim()));
  }
  LocalizationResult result{article.id, adaloc_strategy(aggregation), m, {}};
  const int n = article.sentence_count();
  if (n == 0) return result;
  const WindowPlan plan = plan_windows(n, m, aggregation_step(aggregation, m));
  const auto features = feature_windows(article, feature_scorer, plan);
  std::vector<std::vector<double>> probs;
  probs.reserve(features.size());
  for (const auto& f : features) probs.push_back(adaloc_forward(model, f));
  result.predictions =
      aggregate_position_outputs(n, plan, probs, aggregation, options);
  return result;
}

std::string encode_localization(const LocalizationResult& result) {
  detail::Json j;
  j["article_id"] = result.article_id;
  j["strategy"] = std::string(strategy_name(result.strategy));
  j["m"] = result.m;
  detail::Json preds = detail::Json::array();
  for (const SentencePrediction& p : result.predictions) {
    preds.push_back({{"idx", p.sentence_idx}, {"score", p.score}, {"label", p.label}});
  }
  j["predictions"] = std::move(preds);
  return detail::dump_line(j);
}

LocalizationResult decode_localization(std::string_view line) {
  const detail::Json j = detail::parse_json(line, "prediction");
  LocalizationResult r;
  r.article_id = detail::require_as<std::string>(j, "article_id", "prediction");
  const std::string what = "prediction for '" + r.article_id + "'";
  r.strategy = parse_strategy(detail::require_as<std::string>(j, "strategy", what));
  r.m = detail::require_as<int>(j, "m", what);
  for (const detail::Json& p : detail::require(j, "predictions", what)) {
    SentencePrediction sp;
    sp.sentence_idx = detail::require_as<int>(p, "idx", what);
    sp.score = detail::require_as<double>(p, "score", what);
    sp.label = detail::require_as<int>(p, "label", what);
    if (!(sp.score >= 0.0 && sp.score <= 1.0) ||
        (sp.label != kHuman && sp.label != kMachine)) {
      throw DataError(what + ": score or label out of range");
    }
    r.predictions.push_back(std::move(sp));
  }
  return r;
}

std::vector<LocalizationResult> read_localizations(
    const std::filesystem::path& path) {
  std::vector<LocalizationResult> out;
  for_each_line(path, [&](std::string_view line, int number) {
    try {
      out.push_back(decode_localization(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(number) + ": " +
                      e.what());
    }
  });
  return out;
}

}  // namespace mgtloc
