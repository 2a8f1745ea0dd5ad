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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "mgtloc/errors.hpp"
#include "mgtloc/segmenter.hpp"
#include "mgtloc/synthesis.hpp"
#include "toy_corpus.hpp"

namespace mgtloc {
namespace {

// "Lead w1 w2 ... ." with exactly `tokens` whitespace tokens.
std::string sentence_of(int tokens, const std::string& lead) {
  std::string s = lead;
  for (int i = 1; i < tokens; ++i) s += " w" + std::to_string(i);
  return s + ".";
}

Article human_article(const std::string& id, int sentences, int tokens) {
  Article a;
  a.id = id;
  a.title = "Title";
  for (int i = 0; i < sentences; ++i) {
    if (i) a.body += i % 4 == 0 ? "\n\n" : " ";
    a.body += sentence_of(tokens, "Human" + std::to_string(i));
  }
  a.sentences = segment(a.body);
  return a;
}

GenerationPool pool_of(const std::string& generator, std::vector<PoolEntry> entries) {
  return {generator, {SamplingMethod::kTopP, std::nullopt, 0.96}, std::move(entries)};
}

std::vector<std::pair<int, int>> runs(const std::vector<int>& labels) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[static_cast<std::size_t>(i)] != kMachine) continue;
    if (out.empty() || out.back().second != i - 1) out.push_back({i, i});
    else out.back().second = i;
  }
  return out;
}

SynthesisConfig fixed(int k, int min_tokens, int max_tokens) {
  SynthesisConfig c;
  c.num_segments = k;
  c.min_segment_tokens = min_tokens;
  c.max_segment_tokens = max_tokens;
  return c;
}

TEST(SpliceTest, TenSentenceArticle) {
  const Article human = human_article("h1", 10, 10);
  std::string machine;
  for (int i = 0; i < 6; ++i) machine += sentence_of(20, "Machine" + std::to_string(i)) + " ";
  const auto pool = pool_of("gen", {{"h1", machine}});
  Rng rng(1);
  const Article out = splice(human, pool, fixed(1, 40, 40), rng);

  EXPECT_EQ(out.id, "h1::gen");
  EXPECT_EQ(out.title, "Title");
  EXPECT_TRUE(validate_article(out).empty());
  const auto r = runs(*out.labels);
  ASSERT_EQ(r.size(), 1u);
  // Two 20-token machine sentences replace 2..6 human sentences.
  EXPECT_EQ(r[0].second - r[0].first + 1, 2);
  ASSERT_EQ(out.meta->segments.size(), 1u);
  EXPECT_EQ(out.meta->segments[0].token_count, 40);
  EXPECT_EQ(out.meta->segments[0].sent_start_idx, r[0].first);
  EXPECT_GE(r[0].first, 2);
  const int replaced = 10 - (out.sentence_count() - 2);
  EXPECT_GE(replaced, 2);
  EXPECT_LE(replaced, 6);
  EXPECT_GE(out.sentence_count() - 1 - r[0].second, 2);
  EXPECT_EQ(out.meta->generator_name, "gen");
  EXPECT_EQ(out.meta->sampling.method, SamplingMethod::kTopP);
}

TEST(SpliceTest, ThreeSentenceRunOf57Tokens) {
  const Article human = human_article("h2", 10, 12);
  std::string machine;
  for (int i = 0; i < 5; ++i) machine += sentence_of(19, "Machine" + std::to_string(i)) + " ";
  Rng rng(6);
  const Article out = splice(human, pool_of("gen", {{"h2", machine}}), fixed(1, 57, 57), rng);
  EXPECT_TRUE(validate_article(out).empty());
  const auto r = runs(*out.labels);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].second - r[0].first + 1, 3);
  EXPECT_EQ(out.meta->num_segments(), 1);
  EXPECT_EQ(out.meta->segments[0].token_count, 57);
}

TEST(SpliceTest, SkipsWhenNoRunFits) {
  const Article human = human_article("h1", 12, 10);
  const auto pool = pool_of("gen", {{"h1", sentence_of(45, "Long") + " " + sentence_of(45, "More")}});
  Rng rng(2);
  EXPECT_THROW(splice(human, pool, fixed(1, 40, 40), rng), SkipError);
}

TEST(SpliceTest, SkipsShortArticlesAndMissingEntries) {
  const auto pool = pool_of("gen", {{"other", sentence_of(50, "Machine")}});
  Rng rng(3);
  EXPECT_THROW(splice(human_article("h1", 3, 10), pool, fixed(1, 40, 300), rng), SkipError);
  EXPECT_THROW(splice(human_article("h1", 20, 10), pool, fixed(1, 40, 300), rng), SkipError);
}

TEST(SpliceTest, GenericEntriesAreFallback) {
  const auto pool = pool_of("gen", {{"", sentence_of(50, "Generic")}});
  Rng rng(4);
  const Article out = splice(human_article("h9", 14, 12), pool, fixed(1, 40, 300), rng);
  EXPECT_NE(out.body.find("Generic"), std::string::npos);
}

TEST(SpliceTest, InsertModeKeepsEveryHumanSentence) {
  const Article human = human_article("h1", 12, 10);
  std::string machine;
  for (int i = 0; i < 8; ++i) machine += sentence_of(15, "Machine" + std::to_string(i)) + " ";
  auto config = fixed(2, 40, 60);
  config.mode = SpliceMode::kInsert;
  Rng rng(5);
  const Article out = splice(human, pool_of("gen", {{"h1", machine}}), config, rng);
  EXPECT_TRUE(validate_article(out).empty());
  std::vector<std::string> kept;
  for (int i = 0; i < out.sentence_count(); ++i) {
    if ((*out.labels)[static_cast<std::size_t>(i)] == kHuman) {
      kept.push_back(out.sentences[static_cast<std::size_t>(i)].text);
    }
  }
  ASSERT_EQ(kept.size(), 12u);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(kept[static_cast<std::size_t>(i)], human.sentences[static_cast<std::size_t>(i)].text);
  EXPECT_EQ(runs(*out.labels).size(), 2u);
}

TEST(SynthesisConfigTest, Validation) {
  EXPECT_NO_THROW(SynthesisConfig{}.validate());
  EXPECT_THROW(fixed(1, 30, 300).validate(), UsageError);
  EXPECT_THROW(fixed(1, 40, 301).validate(), UsageError);
  EXPECT_THROW(fixed(1, 100, 50).validate(), UsageError);
  EXPECT_THROW(fixed(4, 40, 300).validate(), UsageError);
  auto gap = fixed(1, 40, 300);
  gap.min_human_gap = 0;
  EXPECT_THROW(gap.validate(), UsageError);
}

class ToyDatasetTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    testing::ToyCorpusConfig c;
    c.articles = 60;
    corpus_ = new testing::ToyCorpus(testing::make_toy_corpus(c));
  }
  static void TearDownTestSuite() { delete corpus_; }
  static testing::ToyCorpus* corpus_;
};
testing::ToyCorpus* ToyDatasetTest::corpus_ = nullptr;

TEST_F(ToyDatasetTest, Invariants) {
  SynthesisConfig config;
  config.rng_seed = 9;
  const Dataset d = build_dataset(corpus_->human, corpus_->pools, config);
  ASSERT_GT(d.articles.size(), 100u);
  std::map<std::string, const Article*> humans;
  for (const auto& h : corpus_->human) humans[h.id] = &h;
  for (const Article& a : d.articles) {
    ASSERT_TRUE(validate_article(a).empty()) << a.id;
    const auto r = runs(*a.labels);
    ASSERT_EQ(static_cast<int>(r.size()), a.meta->num_segments()) << a.id;
    for (std::size_t s = 0; s < r.size(); ++s) {
      const auto& seg = a.meta->segments[s];
      EXPECT_EQ(seg.sent_start_idx, r[s].first);
      EXPECT_EQ(seg.sent_end_idx, r[s].second);
      EXPECT_GE(seg.token_count, 40);
      EXPECT_LE(seg.token_count, 300);
      if (s > 0) EXPECT_GE(r[s].first - r[s - 1].second - 1, 2);
    }
    EXPECT_GE(r.front().first, 2);
    EXPECT_GE(a.sentence_count() - 1 - r.back().second, 2);

    // Human sentences appear in their original order with the original bytes.
    const Article& h = *humans.at(a.id.substr(0, a.id.find("::")));
    std::size_t next = 0;
    for (int i = 0; i < a.sentence_count(); ++i) {
      if ((*a.labels)[static_cast<std::size_t>(i)] != kHuman) continue;
      const auto& s = a.sentences[static_cast<std::size_t>(i)];
      const std::string bytes = a.body.substr(s.span.start, s.span.size());
      while (next < h.sentences.size() && h.sentences[next].text != s.text) ++next;
      ASSERT_LT(next, h.sentences.size()) << a.id << " sentence " << i;
      EXPECT_EQ(bytes, h.body.substr(h.sentences[next].span.start, h.sentences[next].span.size()));
      ++next;
    }
  }
  EXPECT_TRUE(std::is_sorted(d.articles.begin(), d.articles.end(),
                             [](const Article& x, const Article& y) { return x.id < y.id; }));
  int total = 0;
  for (int c : d.stats.segment_count_histogram) total += c;
  EXPECT_EQ(total, d.stats.articles);
  EXPECT_GT(d.stats.prevalence, 0.0);
  EXPECT_LT(d.stats.prevalence, 1.0);
}

TEST_F(ToyDatasetTest, DeterministicAndThreadIndependent) {
  SynthesisConfig config;
  config.rng_seed = 10;
  const Dataset a = build_dataset(corpus_->human, corpus_->pools, config, 1);
  const Dataset b = build_dataset(corpus_->human, corpus_->pools, config, 4);
  EXPECT_EQ(a.articles, b.articles);
  EXPECT_EQ(a.stats.to_json(), b.stats.to_json());
  config.rng_seed = 11;
  EXPECT_NE(build_dataset(corpus_->human, corpus_->pools, config).articles, a.articles);
}

TEST_F(ToyDatasetTest, RejectsBadInput) {
  const SynthesisConfig config;
  EXPECT_THROW(build_dataset({}, corpus_->pools, config), DataError);
  EXPECT_THROW(build_dataset(corpus_->human, {}, config), UsageError);
  std::vector<GenerationPool> dup{corpus_->pools[0], corpus_->pools[0]};
  EXPECT_THROW(build_dataset(corpus_->human, dup, config), UsageError);
  std::vector<Article> twice{corpus_->human[0], corpus_->human[0]};
  EXPECT_THROW(build_dataset(twice, corpus_->pools, config), DataError);
}

TEST_F(ToyDatasetTest, AllSkippedPoolWarns) {
  std::vector<GenerationPool> pools{pool_of("empty", {{"nobody", sentence_of(50, "Machine")}})};
  const Dataset d = build_dataset(corpus_->human, pools, SynthesisConfig{});
  EXPECT_TRUE(d.articles.empty());
  EXPECT_FALSE(d.stats.warnings.empty());
  EXPECT_EQ(d.stats.pools[0].skipped, static_cast<int>(corpus_->human.size()));
}

TEST(PoolFileTest, GroupsByGenerator) {
  const auto path = std::filesystem::temp_directory_path() / "mgtloc_pool_test.jsonl";
  const auto a = pool_of("a", {});
  GenerationPool b{"b", {SamplingMethod::kTopK, 40, std::nullopt}, {}};
  {
    std::ofstream out(path);
    out << encode_pool_entry(a, {"h1", "Text one here."}) << "\n";
    out << encode_pool_entry(b, {"", "Text two here."}) << "\n";
    out << encode_pool_entry(a, {"h2", "Text three here."}) << "\n";
  }
  const auto pools = read_pool_file(path);
  ASSERT_EQ(pools.size(), 2u);
  EXPECT_EQ(pools[0].generator_name, "a");
  EXPECT_EQ(pools[0].entries.size(), 2u);
  EXPECT_EQ(pools[0].entries[1].source_article_id, "h2");
  EXPECT_EQ(pools[1].sampling, b.sampling);
  {
    std::ofstream out(path, std::ios::app);
    GenerationPool a2 = b;
    a2.generator_name = "a";
    out << encode_pool_entry(a2, {"h3", "Conflicting sampling here."}) << "\n";
  }
  EXPECT_THROW(read_pool_file(path), DataError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace mgtloc
