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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string_view>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "mgtloc/adaloc.hpp"
#include "mgtloc/adaloc_train.hpp"
#include "mgtloc/article_io.hpp"
#include "mgtloc/errors.hpp"
#include "mgtloc/localizer.hpp"
#include "mgtloc/metrics.hpp"
#include "mgtloc/ngram_scorer.hpp"
#include "mgtloc/parallel.hpp"
#include "mgtloc/report.hpp"
#include "mgtloc/synthesis.hpp"
#include "scorer_spec.hpp"

namespace mgtloc::cli {
namespace {

using Json = nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed for " + path);
}

std::vector<Article> read_sorted(const std::string& path) {
  std::vector<Article> articles = read_articles(path);
  std::stable_sort(articles.begin(), articles.end(),
                   [](const Article& a, const Article& b) { return a.id < b.id; });
  return articles;
}

bool ends_with_html(const std::string& path) {
  return path.ends_with(".html") || path.ends_with(".htm");
}

}  // namespace

void run_synth(const GlobalArgs& g, const SynthArgs& a) {
  SynthesisConfig config;
  if (a.segments != "uniform") config.num_segments = std::stoi(a.segments);
  config.min_segment_tokens = a.min_tokens;
  config.max_segment_tokens = a.max_tokens;
  config.min_human_gap = a.min_gap;
  config.mode = a.insert ? SpliceMode::kInsert : SpliceMode::kReplace;
  config.rng_seed = g.seed;
  config.validate();

  const std::vector<Article> human = read_articles(a.human);
  std::vector<GenerationPool> pools;
  for (const std::string& path : a.pools) {
    for (GenerationPool& p : read_pool_file(path)) pools.push_back(std::move(p));
  }
  const Dataset dataset = build_dataset(human, pools, config, g.threads);
  write_articles(a.out, dataset.articles);
  if (!a.stats.empty()) write_text(a.stats, dataset.stats.to_json() + "\n");
  int skipped = 0;
  for (const PoolStats& p : dataset.stats.pools) skipped += p.skipped;
  spdlog::info("synthesized {} articles ({} skipped), prevalence {:.4f}",
               dataset.stats.articles, skipped, dataset.stats.prevalence);
}

void run_train_ngram(const GlobalArgs&, const TrainNgramArgs& a) {
  const std::vector<Article> articles = read_articles(a.train);
  std::vector<LabeledText> texts;
  for (const Article& article : articles) {
    if (!article.labels) {
      throw DataError(a.train + ": article '" + article.id + "' has no labels");
    }
    for (std::size_t i = 0; i < article.sentences.size(); ++i) {
      texts.push_back({article.sentences[i].text, (*article.labels)[i]});
    }
  }
  save_ngram_model(train_ngram_scorer(texts, a.order), a.out);
  spdlog::info("trained {}-gram scorer on {} sentences", a.order, texts.size());
}

void run_score(const GlobalArgs& g, const ScoreArgs& a) {
  const ScorerSpec spec = parse_scorer_spec(a.scorer);
  if (a.step > a.m) throw UsageError("--step must not exceed --m");
  const bool features = a.mode == "feature";

  const std::vector<Article> articles = read_sorted(a.in);
  auto scorer = make_scorer(spec, articles, g.seed, a.timeout);
  std::vector<std::vector<std::string>> lines(articles.size());
  parallel_for(articles.size(), g.threads, [&](std::size_t i) {
    const Article& article = articles[i];
    if (article.sentences.empty()) return;
    const WindowPlan plan = plan_windows(article.sentence_count(), a.m, a.step);
    if (features) {
      std::vector<ChunkExample> examples =
          build_chunk_examples(std::span<const Article>(&article, 1), *scorer, a.m,
                               a.step);
      for (const ChunkExample& ex : examples) {
        lines[i].push_back(encode_chunk_example(ex));
      }
      return;
    }
    const std::vector<double> scores = score_windows(article, *scorer, plan);
    for (std::size_t w = 0; w < plan.windows.size(); ++w) {
      Json j;
      j["article_id"] = article.id;
      j["first"] = plan.windows[w].first;
      j["last"] = plan.windows[w].last;
      j["score"] = scores[w];
      lines[i].push_back(j.dump());
    }
  });
  std::vector<std::string> all;
  for (auto& l : lines) all.insert(all.end(), l.begin(), l.end());
  write_lines(a.out, all);
  spdlog::info("wrote {} {} records", all.size(), features ? "feature" : "score");
}

void run_localize(const GlobalArgs& g, const LocalizeArgs& a) {
  const ScorerSpec spec = parse_scorer_spec(a.scorer);
  const Strategy base = a.strategy == "single" ? Strategy::kSingle
                        : a.strategy == "vote" ? Strategy::kVote
                                               : Strategy::kAdalocVote;
  const bool adaloc = base == Strategy::kAdalocVote;
  const Aggregation aggregation = parse_aggregation(a.agg);
  if (adaloc && a.model.empty()) {
    throw UsageError("--strategy adaloc needs --model (a model file or 'oracle')");
  }
  LocalizeOptions options;
  options.threshold = a.threshold;
  options.vote_rule = a.vote_rule == "mean" ? VoteRule::kMeanScore : VoteRule::kMajority;

  const std::vector<Article> articles = read_sorted(a.in);
  auto scorer = make_scorer(spec, articles, g.seed, a.timeout);
  AdaLocModel model;
  if (adaloc) {
    const int dim = static_cast<int>(scorer->feature_dim());
    model = a.model == "oracle" ? make_oracle_model(a.m, dim) : load_model(a.model, dim);
    if (model.m != a.m) {
      throw UsageError("model has m=" + std::to_string(model.m) + " but --m is " +
                       std::to_string(a.m));
    }
  }

  std::vector<LocalizationResult> results(articles.size());
  parallel_for(articles.size(), g.threads, [&](std::size_t i) {
    const Article& article = articles[i];
    if (adaloc) {
      results[i] = localize_adaloc(article, *scorer, model, a.m, aggregation, options);
    } else if (base == Strategy::kSingle) {
      results[i] = localize_single(article, *scorer, options);
    } else {
      results[i] = localize_vote(article, *scorer, a.m, options);
    }
  });

  std::vector<std::string> lines;
  lines.reserve(results.size());
  for (const LocalizationResult& r : results) lines.push_back(encode_localization(r));
  write_lines(a.out, lines);
  if (!a.report.empty()) {
    if (ends_with_html(a.report)) {
      write_text(a.report, render_html(articles, results));
    } else {
      std::string text;
      for (std::size_t i = 0; i < articles.size(); ++i) {
        text += render_text(articles[i], results[i]) + "\n";
      }
      write_text(a.report, text);
    }
  }
  spdlog::info("localized {} articles with {}", results.size(), scorer->name());
}

void run_train_adaloc(const GlobalArgs& g, const TrainAdalocArgs& a) {
  TrainConfig config;
  config.learning_rate = a.lr;
  config.batch_size = a.batch_size;
  config.max_epochs = a.epochs;
  config.patience = a.patience;
  config.dropout_rate = a.dropout;
  config.seed = g.seed;
  config.hidden_dim = a.hidden;
  config.activation = parse_activation(a.activation);
  config.validate();
  std::optional<ScorerSpec> spec;
  if (!a.val.empty()) {
    if (a.scorer.empty()) throw UsageError("--val needs --scorer for its features");
    spec = parse_scorer_spec(a.scorer);
  }

  const std::vector<ChunkExample> examples = read_chunk_examples(a.train);
  if (examples.empty()) throw DataError(a.train + ": no training examples");
  const int m = static_cast<int>(examples.front().targets.size());
  if (a.m && *a.m != m) {
    throw UsageError("--m " + std::to_string(*a.m) + " does not match the " +
                     std::to_string(m) + "-position training examples");
  }
  std::optional<ValidationSet> validation;
  if (spec) {
    const std::vector<Article> val = read_sorted(a.val);
    auto scorer = make_scorer(*spec, val, g.seed, a.timeout);
    if (scorer->feature_dim() != examples.front().feature.size()) {
      throw UsageError("validation scorer feature_dim " +
                       std::to_string(scorer->feature_dim()) +
                       " differs from the training features");
    }
    validation = prepare_validation(val, *scorer, m);
  }
  const TrainResult result =
      train(examples, validation ? &*validation : nullptr, config);
  save_model(result.model, a.out);
  if (!a.log.empty()) write_text(a.log, result.log.to_json() + "\n");
  spdlog::info("saved model from epoch {} to {}", result.log.best_epoch, a.out);
}

void run_eval(const GlobalArgs&, const EvalArgs& a) {
  if (a.threshold && !(*a.threshold >= 0.0 && *a.threshold <= 1.0)) {
    throw UsageError("--threshold must be in [0,1]");
  }
  const std::vector<Article> truth = read_articles(a.truth);
  std::vector<LocalizationResult> preds;
  for (const std::string& path : a.preds) {
    for (LocalizationResult& r : read_localizations(path)) preds.push_back(std::move(r));
  }
  const EvalReport report = evaluate(truth, preds, a.threshold);
  if (a.out.empty()) {
    std::cout << report.to_json() << "\n";
  } else {
    write_text(a.out, report.to_json() + "\n");
  }
  if (!a.csv.empty()) {
    std::string method = a.method;
    if (method.empty() && !preds.empty()) {
      method = std::string(strategy_name(preds.front().strategy));
    }
    write_text(a.csv, report.csv_header() + "\n" + report.csv_row(method) + "\n");
  }
  spdlog::info("mAP {:.4f}, All {:.4f}, precision {:.4f}, recall {:.4f}",
               report.map_mean, report.all_ap, report.precision, report.recall);
}

void run_report(const GlobalArgs&, const ReportArgs& a) {
  const std::vector<Article> articles = read_articles(a.in);
  const std::vector<LocalizationResult> preds = read_localizations(a.preds);
  std::unordered_map<std::string_view, const Article*> by_id;
  for (const Article& x : articles) by_id.emplace(x.id, &x);
  std::vector<Article> matched;
  for (const LocalizationResult& r : preds) {
    const auto it = by_id.find(r.article_id);
    if (it == by_id.end()) {
      throw DataError(a.preds + ": no article '" + r.article_id + "' in " + a.in);
    }
    matched.push_back(*it->second);
  }
  const bool html = a.format.empty() ? ends_with_html(a.out) : a.format == "html";
  std::string text;
  if (html) {
    text = render_html(matched, preds);
  } else {
    for (std::size_t i = 0; i < matched.size(); ++i) {
      text += render_text(matched[i], preds[i]) + "\n";
    }
  }
  write_text(a.out, text);
}

}  // namespace mgtloc::cli
