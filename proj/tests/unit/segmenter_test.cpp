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

#include <sstream>

#include <gtest/gtest.h>

#include "mgtloc/errors.hpp"
#include "mgtloc/random.hpp"
#include "mgtloc/segmenter.hpp"

namespace mgtloc {
namespace {

std::vector<std::string> texts(const std::vector<Sentence>& sentences) {
  std::vector<std::string> out;
  for (const Sentence& s : sentences) out.push_back(s.text);
  return out;
}

TEST(Segment, TwoTerminalPeriods) {
  // The text is 20 bytes long, so the second span ends at 20.
  const auto s = segment("A cat sat. It slept.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].span, (CharSpan{0, 10}));
  EXPECT_EQ(s[1].span, (CharSpan{11, 20}));
  EXPECT_EQ(s[0].text, "A cat sat.");
  EXPECT_EQ(s[1].token_count, 2);
}

TEST(Segment, AbbreviationIsNotABoundary) {
  EXPECT_EQ(texts(segment("Dr. Smith arrived. He spoke.")),
            (std::vector<std::string>{"Dr. Smith arrived.", "He spoke."}));
  EXPECT_EQ(texts(segment("She moved to the U.S. Army base. It was late.")),
            (std::vector<std::string>{"She moved to the U.S. Army base.",
                                      "It was late."}));
}

TEST(Segment, ParagraphBreakSplits) {
  const auto s = segment("One line\n\nTwo line");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].span, (CharSpan{0, 8}));
  EXPECT_EQ(s[1].span, (CharSpan{10, 18}));
  EXPECT_EQ(segment("One line\n \t\nTwo line").size(), 2u);
  EXPECT_EQ(segment("One line\nTwo line").size(), 1u);
}

TEST(Segment, LowercaseContinuationIsNotABoundary) {
  EXPECT_EQ(segment("It cost 3 vs. about 5. Fine.").size(), 2u);
  EXPECT_EQ(segment("He said wow. then left.").size(), 1u);
}

TEST(Segment, QuestionAndExclamationRunsWithClosers) {
  EXPECT_EQ(texts(segment("Really?! \"Yes.\" (Fine.) Done")),
            (std::vector<std::string>{"Really?!", "\"Yes.\"", "(Fine.)", "Done"}));
  EXPECT_EQ(texts(segment("He said \xE2\x80\x9CStop.\xE2\x80\x9D Then left.")),
            (std::vector<std::string>{"He said \xE2\x80\x9CStop.\xE2\x80\x9D",
                                      "Then left."}));
}

TEST(Segment, PunctuationInsideTokenIsNotABoundary) {
  EXPECT_EQ(segment("Version 3.5 shipped. Users rejoiced.").size(), 2u);
  EXPECT_EQ(segment("Visit example.com today. Thanks.").size(), 2u);
}

TEST(Segment, EmptyAndWhitespaceInput) {
  EXPECT_TRUE(segment("").empty());
  EXPECT_TRUE(segment(" \n\t\n ").empty());
}

TEST(Segment, ShortFragmentsMerge) {
  const auto s = segment("Hello there. ! Bye now.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].text, "Hello there. !");
}

TEST(Segment, CustomAbbreviationList) {
  SegmenterConfig config;
  EXPECT_EQ(segment("See Dr. Who.", config).size(), 2u);
  std::istringstream list("# comment\nDR.\n  Fig  # figures\n\n");
  config.abbreviations = parse_abbreviation_list(list);
  EXPECT_EQ(config.abbreviations,
            (std::set<std::string, std::less<>>{"dr", "fig"}));
  EXPECT_EQ(segment("See Dr. Who.", config).size(), 1u);
}

TEST(Segment, MissingAbbreviationFileIsDataError) {
  EXPECT_THROW(load_abbreviation_file("/nonexistent/abbrev.txt"), DataError);
}

TEST(Segment, DefaultListContainsCommonEntries) {
  const auto& a = SegmenterConfig::defaults().abbreviations;
  for (const char* e : {"mr", "dr", "u.s", "etc", "e.g", "jan"}) {
    EXPECT_TRUE(a.contains(std::string_view(e))) << e;
  }
}

TEST(WellFormed, ReferenceExamples) {
  EXPECT_TRUE(well_formed(segment("The market fell sharply today.")[0]));
  EXPECT_FALSE(well_formed(segment("and then some")[0]));
  EXPECT_FALSE(well_formed(segment("Why?")[0]));
}

TEST(WellFormed, StartAndEndRules) {
  EXPECT_TRUE(well_formed(segment("42 people came today.")[0]));
  EXPECT_TRUE(well_formed(segment("\"We won the match,\" she said.")[0]));
  EXPECT_TRUE(well_formed(segment("\"It is over now.\"")[0]));
  EXPECT_FALSE(well_formed(segment("The market fell sharply")[0]));
  EXPECT_FALSE(well_formed(segment("(the market fell today.)")[0]));
}

// Random texts assembled from fragments that exercise every rule.
std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "The", "cat", "sat", "Dr.", "U.S.", "etc.", "ran.", "walked!", "why?!",
      "\"quoted.\"", "(aside.)", "3.5", "e.g.", "again.", "Mr.", "and", "Then",
      "x", ".", "!", "\n\n", "\n", "  ", "\t"};
  std::string text;
  const int n = rng.uniform_int(0, 40);
  for (int i = 0; i < n; ++i) {
    text += pieces[rng.below(pieces.size())];
    text += rng.bernoulli(0.8) ? " " : "";
  }
  return text;
}

TEST(SegmentProperties, CoverageOrderAndReconstruction) {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string text = random_text(rng);
    const auto sentences = segment(text);
    std::vector<int> owner(text.size(), -1);
    std::string joined;
    for (std::size_t k = 0; k < sentences.size(); ++k) {
      const Sentence& s = sentences[k];
      ASSERT_LT(s.span.start, s.span.end);
      if (k > 0) ASSERT_LE(sentences[k - 1].span.end, s.span.start);
      ASSERT_GE(s.token_count, 1);
      ASSERT_EQ(s.text, normalize_whitespace(std::string_view(text).substr(
                            s.span.start, s.span.size())));
      for (std::size_t b = s.span.start; b < s.span.end; ++b) owner[b] = static_cast<int>(k);
      if (!joined.empty()) joined += ' ';
      joined += s.text;
    }
    for (std::size_t b = 0; b < text.size(); ++b) {
      const bool space = text[b] == ' ' || text[b] == '\n' || text[b] == '\t';
      if (!space) ASSERT_NE(owner[b], -1) << "byte " << b << " of [" << text << "]";
    }
    ASSERT_EQ(joined, normalize_whitespace(text)) << text;
  }
}

TEST(SegmentProperties, IdempotentAndDeterministic) {
  Rng rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string text = random_text(rng);
    const auto sentences = segment(text);
    ASSERT_EQ(sentences, segment(text));
    for (const Sentence& s : sentences) {
      const auto again = segment(s.text);
      ASSERT_EQ(again.size(), 1u) << "[" << s.text << "] from [" << text << "]";
      ASSERT_EQ(again[0].text, s.text);
    }
  }
}

}  // namespace
}  // namespace mgtloc
