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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gradient_check.hpp"
#include "json.hpp"
#include "mgtloc/adaloc_train.hpp"
#include "mgtloc/article_io.hpp"
#include "mgtloc/localizer.hpp"
#include "mgtloc/metrics.hpp"
#include "mgtloc/ngram_scorer.hpp"
#include "mgtloc/segmenter.hpp"
#include "mgtloc/synthesis.hpp"
#include "oracles.hpp"
#include "toy_corpus.hpp"

namespace mgtloc {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Shared synthetic corpus for the directional checks: two generators that
// shift a fraction of word choices towards a second Zipf ranking.
testing::ToyCorpusConfig directional_config() {
  testing::ToyCorpusConfig c;
  c.articles = 1300;
  c.generators = {{"gen-a", 0.08}, {"gen-b", 0.12}};
  return c;
}

constexpr int kTestHumans = 200;
constexpr int kValHumans = 100;

struct Directional {
  testing::ToyCorpus corpus;
  std::vector<Article> test_humans;
  std::vector<Article> test, val, train;
  NgramScorerModel ngram;
};

const Directional& directional() {
  static const Directional d = [] {
    Directional out;
    const auto config = directional_config();
    out.corpus = testing::make_toy_corpus(config);
    out.test_humans.assign(out.corpus.human.begin(), out.corpus.human.begin() + kTestHumans);
    SynthesisConfig sc;
    sc.rng_seed = 7;
    const Dataset ds = build_dataset(out.corpus.human, out.corpus.pools, sc);
    for (const Article& a : ds.articles) {
      const int h = std::atoi(a.id.c_str() + 1);
      (h < kTestHumans ? out.test : h < kTestHumans + kValHumans ? out.val : out.train)
          .push_back(a);
    }
    // The detector sees separately drawn text, never the evaluation articles.
    const auto texts = testing::make_toy_training_text(config, 300, 99);
    out.ngram = train_ngram_scorer(texts);
    return out;
  }();
  return d;
}

double map_of(std::span<const Article> articles,
              const std::function<LocalizationResult(const Article&)>& localize) {
  std::vector<LocalizationResult> results;
  results.reserve(articles.size());
  for (const Article& a : articles) results.push_back(localize(a));
  return evaluate(articles, results).map_mean;
}

// ---------------------------------------------------------------------------

struct PipelineFiles {
  std::vector<std::string> outputs;  // file contents in a fixed order
  std::map<std::string, double> maps;
  int articles = 0;
};

PipelineFiles oracle_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  testing::ToyCorpusConfig c;
  c.articles = 110;
  c.seed = 21;
  const auto corpus = testing::make_toy_corpus(c);
  write_articles(dir / "human.jsonl", corpus.human);
  std::vector<std::string> pool_lines;
  for (const auto& pool : corpus.pools) {
    for (const auto& e : pool.entries) pool_lines.push_back(encode_pool_entry(pool, e));
  }
  write_lines(dir / "pool.jsonl", pool_lines);

  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "mgtloc");
    args.insert(args.begin() + 1, {"--log-level", "warn", "--seed", "2024"});
    if (cli::run(args) != cli::kExitOk) throw Error("command failed: " + args[5]);
  };
  const std::string data = (dir / "data.jsonl").string();
  run({"synth", "--human", (dir / "human.jsonl").string(), "--pool",
       (dir / "pool.jsonl").string(), "--out", (dir / "all.jsonl").string()});
  // Keep the first 200 manipulated articles.
  std::vector<Article> all = read_articles(dir / "all.jsonl");
  if (all.size() < 200) throw Error("synthesis produced fewer than 200 articles");
  all.resize(200);
  write_articles(data, all);

  PipelineFiles files;
  files.articles = static_cast<int>(all.size());
  files.outputs.push_back(slurp(dir / "all.jsonl"));
  const std::vector<std::pair<std::string, std::vector<std::string>>> strategies{
      {"single", {"--strategy", "single"}},
      {"vote", {"--strategy", "vote", "--m", "3"}},
      {"adaloc_vote", {"--strategy", "adaloc", "--model", "oracle", "--agg", "vote"}},
      {"adaloc_skip", {"--strategy", "adaloc", "--model", "oracle", "--agg", "skip"}},
      {"adaloc_middle", {"--strategy", "adaloc", "--model", "oracle", "--agg", "middle"}},
  };
  for (const auto& [name, extra] : strategies) {
    const std::string preds = (dir / (name + ".jsonl")).string();
    const std::string report = (dir / (name + ".json")).string();
    std::vector<std::string> args{"localize", "--in", data, "--scorer", "oracle", "--out", preds};
    args.insert(args.end(), extra.begin(), extra.end());
    run(args);
    run({"eval", "--truth", data, "--preds", preds, "--out", report});
    files.outputs.push_back(slurp(preds));
    files.maps[name] = nlohmann::json::parse(slurp(report))["map"].get<double>();
  }
  return files;
}

Outcome oracle_end_to_end() {
  const auto t0 = Clock::now();
  const PipelineFiles f = oracle_pipeline(fs::temp_directory_path() / "mgtloc_acceptance_e2e");
  const double elapsed = seconds_since(t0);
  bool perfect = true;
  std::string detail = fmt("%d articles;", f.articles);
  for (const auto& [name, map] : f.maps) {
    perfect = perfect && map == 1.0;
    detail += fmt(" %s=%.6f", name.c_str(), map);
  }
  detail += fmt("; %.1fs (limit 30s)", elapsed);
  return {perfect && f.maps.size() == 5 && elapsed < 30.0, detail};
}

Outcome determinism() {
  const auto a = oracle_pipeline(fs::temp_directory_path() / "mgtloc_acceptance_det_a");
  const auto b = oracle_pipeline(fs::temp_directory_path() / "mgtloc_acceptance_det_b");
  std::size_t bytes = 0;
  for (const auto& s : a.outputs) bytes += s.size();
  const bool same = a.outputs == b.outputs;
  return {same, fmt("%zu JSONL files, %zu bytes, %s", a.outputs.size(), bytes,
                    same ? "byte-identical" : "outputs differ")};
}

// ---------------------------------------------------------------------------

Outcome trivial_baselines() {
  testing::ToyCorpusConfig c;
  c.articles = 300;
  c.seed = 31;
  const auto corpus = testing::make_toy_corpus(c);
  SynthesisConfig sc;
  sc.rng_seed = 32;
  const Dataset ds = build_dataset(corpus.human, corpus.pools, sc);

  std::int64_t positives = 0, total = 0;
  for (const Article& a : ds.articles) {
    for (int l : *a.labels) positives += l;
    total += a.sentence_count();
  }
  const double q = static_cast<double>(positives) / static_cast<double>(total);

  auto pooled = [&](ChunkScorer& scorer, int m) {
    std::vector<ScoredLabel> pairs;
    for (const Article& a : ds.articles) {
      const auto r = localize_vote(a, scorer, m);
      for (std::size_t i = 0; i < r.predictions.size(); ++i) {
        pairs.push_back({r.predictions[i].score, (*a.labels)[i]});
      }
    }
    return pairs;
  };

  bool pass = true;
  std::string detail = fmt("q=%.4f over %lld sentences;", q, static_cast<long long>(total));
  for (double v : {0.0, 0.5, 1.0}) {
    ConstantScorer constant(v);
    const double ap = expected_average_precision(pooled(constant, 3));
    pass = pass && std::abs(ap - q) <= 0.02;
    detail += fmt(" const%.1f=%.4f", v, ap);
  }
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RandomScorer random(seed);
    const double ap = expected_average_precision(pooled(random, 1));
    pass = pass && std::abs(ap - q) <= 0.02;
    detail += fmt(" random%llu=%.4f", static_cast<unsigned long long>(seed), ap);
  }
  return {pass, detail + " (tolerance 0.02)"};
}

// ---------------------------------------------------------------------------

// Replays a fixed list of window scores, one per chunk in request order.
class TableScorer final : public ChunkScorer {
 public:
  explicit TableScorer(std::vector<double> scores) : scores_(std::move(scores)) {}
  std::string name() const override { return "table"; }
  bool supports(ScoreMode mode) const override { return mode == ScoreMode::kScore; }
  ChunkResult score(const ChunkRequest& request) override {
    ChunkResult r{request.request_id, {}, {}};
    r.scores.assign(scores_.begin(),
                    scores_.begin() + static_cast<std::ptrdiff_t>(request.chunks.size()));
    return r;
  }

 private:
  std::vector<double> scores_;
};

Outcome vote_equivalence() {
  Rng rng(derive_seed(41, "vote-equivalence"));
  int sentences = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const int m = 1 + static_cast<int>(rng.below(6));
    Article a;
    a.id = "v" + std::to_string(trial);
    for (int i = 0; i < n; ++i) a.body += "Sentence " + std::to_string(i) + " here. ";
    a.sentences = segment(a.body);
    const int windows = n <= m ? 1 : n - m + 1;
    std::vector<double> scores;
    for (int w = 0; w < windows; ++w) {
      // Window labels are random; scores also hit the threshold exactly.
      const auto pick = rng.below(5);
      scores.push_back(pick == 0 ? 0.5 : rng.uniform());
    }
    TableScorer scorer(scores);
    const auto result = localize_vote(a, scorer, m);
    const auto expected = testing::brute_force_vote(scores, n, m);
    for (int i = 0; i < n; ++i) {
      if (result.predictions[static_cast<std::size_t>(i)].label !=
          expected[static_cast<std::size_t>(i)]) {
        return {false, fmt("article %d (n=%d, m=%d) differs at sentence %d", trial, n, m, i)};
      }
    }
    sentences += n;
  }
  return {true, fmt("1000 articles, %d sentences, all equal", sentences)};
}

Outcome ap_equivalence() {
  Rng rng(derive_seed(42, "ap-equivalence"));
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(200));
    std::vector<ScoredLabel> pairs;
    for (int i = 0; i < n; ++i) {
      // Distinct scores: a shuffled grid plus jitter smaller than its step.
      pairs.push_back({(i + 0.5 * rng.uniform()) / n, rng.bernoulli(0.3) ? kMachine : kHuman});
    }
    pairs[rng.below(pairs.size())].label = kMachine;
    rng.shuffle(std::span<ScoredLabel>(pairs));
    worst = std::max(worst, std::abs(average_precision(pairs) -
                                     testing::sweep_average_precision(pairs)));
  }
  return {worst <= 1e-9, fmt("500 sets, max |diff| = %.3g (tolerance 1e-9)", worst)};
}

Outcome gradient_check() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int instance = 0;
  for (int m : {1, 3, 5}) {
    const int count = m == 1 ? 6 : 7;
    for (int i = 0; i < count; ++i, ++instance) {
      const auto act = i % 2 ? Activation::kTanh : Activation::kRelu;
      const int valid = 1 + i % m;
      const auto c = testing::random_gradient_case(m, 32, 24, valid, act, 500 + instance);
      worst = std::max(worst, testing::max_gradient_relative_error(c.model, c.example));
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-4 && elapsed < 60.0,
          fmt("%d instances, max relative error %.3g (tolerance 1e-4); %.1fs (limit 60s)",
              instance, worst, elapsed)};
}

// ---------------------------------------------------------------------------

Outcome method_ordering() {
  const auto t0 = Clock::now();
  const Directional& d = directional();
  NgramScorer scorer(d.ngram);
  constexpr int m = 3;

  const double single =
      map_of(d.test, [&](const Article& a) { return localize_single(a, scorer); });
  const double vote =
      map_of(d.test, [&](const Article& a) { return localize_vote(a, scorer, m); });

  const auto examples = build_chunk_examples(d.train, scorer, m, 1);
  const auto validation = prepare_validation(d.val, scorer, m);
  TrainConfig tc;
  tc.seed = 5;
  const TrainResult trained = train(examples, &validation, tc);

  auto adaloc = [&](Aggregation agg) {
    return map_of(d.test, [&](const Article& a) {
      return localize_adaloc(a, scorer, trained.model, m, agg);
    });
  };
  const double ada_vote = adaloc(Aggregation::kVote);
  const double ada_skip = adaloc(Aggregation::kSkip);
  const double elapsed = seconds_since(t0);

  constexpr double margin = 0.02;
  const bool pass = ada_vote - vote >= margin && vote - single >= margin &&
                    ada_vote - ada_skip >= margin && elapsed < 600.0;
  return {pass, fmt("mAP single=%.4f vote=%.4f adaloc_skip=%.4f adaloc_vote=%.4f "
                    "(%zu test articles, %zu training windows, margin 0.02); %.0fs (limit 600s)",
                    single, vote, ada_skip, ada_vote, d.test.size(), examples.size(), elapsed)};
}

Outcome window_ablation() {
  const Directional& d = directional();
  NgramScorer scorer(d.ngram);
  std::array<std::array<double, 5>, 3> ap{};
  for (int k = 1; k <= 3; ++k) {
    SynthesisConfig sc;
    sc.rng_seed = 70 + static_cast<std::uint64_t>(k);
    sc.num_segments = k;
    const Dataset ds = build_dataset(d.test_humans, d.corpus.pools, sc);
    for (int m = 1; m <= 5; ++m) {
      ap[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m - 1)] =
          map_of(ds.articles, [&](const Article& a) { return localize_vote(a, scorer, m); });
    }
  }
  auto best_m = [&](int k) {
    const auto& row = ap[static_cast<std::size_t>(k - 1)];
    return 1 + static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  };
  bool larger_helps = true;
  for (int m = 2; m <= 5; ++m) larger_helps = larger_helps && ap[0][static_cast<std::size_t>(m - 1)] > ap[0][0];
  const bool pass = larger_helps && best_m(3) <= best_m(1);
  std::string detail;
  for (int k = 1; k <= 3; ++k) {
    detail += fmt("Segs=%d:", k);
    for (int m = 1; m <= 5; ++m) detail += fmt(" %.4f", ap[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m - 1)]);
    detail += fmt(" (best m=%d); ", best_m(k));
  }
  return {pass, detail + "mAP for m=1..5"};
}

Outcome synthesis_statistics() {
  testing::ToyCorpusConfig c;
  c.articles = 520;
  c.seed = 51;
  const auto corpus = testing::make_toy_corpus(c);
  SynthesisConfig sc;
  sc.rng_seed = 52;
  Dataset ds = build_dataset(corpus.human, corpus.pools, sc);
  if (ds.articles.size() < 1000) {
    return {false, fmt("only %zu articles synthesized", ds.articles.size())};
  }
  ds.articles.resize(1000);

  std::array<double, 3> sum{};
  std::array<int, 3> count{};
  int bad_length = 0, bad_runs = 0;
  for (const Article& a : ds.articles) {
    const int k = a.meta->num_segments();
    int runs = 0;
    for (int i = 0; i < a.sentence_count(); ++i) {
      const bool starts = (*a.labels)[static_cast<std::size_t>(i)] == kMachine &&
                          (i == 0 || (*a.labels)[static_cast<std::size_t>(i - 1)] == kHuman);
      runs += starts;
    }
    bad_runs += runs != k;
    for (const SegmentRecord& s : a.meta->segments) {
      bad_length += s.token_count < kMinSegmentTokens || s.token_count > kMaxSegmentTokens;
      sum[static_cast<std::size_t>(k - 1)] += s.token_count;
      ++count[static_cast<std::size_t>(k - 1)];
    }
  }
  std::array<double, 3> mean{};
  for (std::size_t k = 0; k < 3; ++k) mean[k] = count[k] ? sum[k] / count[k] : 0.0;
  const bool pass = count[0] && count[1] && count[2] && mean[0] > mean[1] &&
                    mean[1] > mean[2] && bad_length == 0 && bad_runs == 0;
  return {pass, fmt("1000 articles; mean segment tokens %.1f > %.1f > %.1f; "
                    "%d lengths outside [40,300]; %d run-count mismatches",
                    mean[0], mean[1], mean[2], bad_length, bad_runs)};
}

}  // namespace
}  // namespace mgtloc

int main() {
  using namespace mgtloc;
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"oracle-end-to-end", oracle_end_to_end},
      {"trivial-baselines", trivial_baselines},
      {"vote-oracle-equivalence", vote_equivalence},
      {"ap-oracle-equivalence", ap_equivalence},
      {"gradient-check", gradient_check},
      {"method-ordering", method_ordering},
      {"window-size-ablation", window_ablation},
      {"synthesis-statistics", synthesis_statistics},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
