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

#include "mgtloc/types.hpp"

#include <cctype>
#include <string>

#include "mgtloc/errors.hpp"

namespace mgtloc {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string describe_sentence(std::size_t i) {
  return "sentence " + std::to_string(i) + ": ";
}

}  // namespace

std::string_view sampling_method_name(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::kTopK:
      return "top_k";
    case SamplingMethod::kTopP:
      return "top_p";
    case SamplingMethod::kExternal:
      return "external";
  }
  return "external";
}

SamplingMethod parse_sampling_method(std::string_view name) {
  if (name == "top_k") return SamplingMethod::kTopK;
  if (name == "top_p") return SamplingMethod::kTopP;
  if (name == "external") return SamplingMethod::kExternal;
  throw DataError("unknown sampling method '" + std::string(name) +
                  "' (expected top_k, top_p or external)");
}

int count_tokens(std::string_view text) {
  int tokens = 0;
  bool in_token = false;
  for (char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++tokens;
    }
  }
  return tokens;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> validate_article(const Article& article) {
  std::vector<std::string> violations;
  const auto& sentences = article.sentences;

  if (article.id.empty()) violations.emplace_back("article id is empty");

  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const Sentence& s = sentences[i];
    if (s.span.start >= s.span.end) {
      violations.push_back(describe_sentence(i) + "span start " +
                           std::to_string(s.span.start) +
                           " is not before end " + std::to_string(s.span.end));
    }
    if (normalize_whitespace(s.text).empty()) {
      violations.push_back(describe_sentence(i) + "text is empty");
    }
    if (s.token_count < 1) {
      violations.push_back(describe_sentence(i) + "token_count " +
                           std::to_string(s.token_count) + " is below 1");
    } else if (s.token_count != count_tokens(s.text)) {
      violations.push_back(describe_sentence(i) + "token_count " +
                           std::to_string(s.token_count) +
                           " disagrees with text (" +
                           std::to_string(count_tokens(s.text)) + " tokens)");
    }
    if (s.span.end > article.body.size()) {
      violations.push_back(describe_sentence(i) + "span end " +
                           std::to_string(s.span.end) +
                           " exceeds body length " +
                           std::to_string(article.body.size()));
    } else if (s.span.start < s.span.end) {
      std::string_view slice(article.body);
      slice = slice.substr(s.span.start, s.span.size());
      if (normalize_whitespace(slice) != s.text) {
        violations.push_back(describe_sentence(i) +
                             "text does not match the body slice at its span");
      }
    }
    if (i > 0 && s.span.start < sentences[i - 1].span.end) {
      violations.push_back(describe_sentence(i) +
                           "span overlaps or precedes the previous sentence");
    }
  }

  if (article.labels) {
    const auto& labels = *article.labels;
    if (labels.size() != sentences.size()) {
      violations.push_back("labels length " + std::to_string(labels.size()) +
                           " does not match sentence count " +
                           std::to_string(sentences.size()));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != kHuman && labels[i] != kMachine) {
        violations.push_back("label " + std::to_string(i) + " is " +
                             std::to_string(labels[i]) + ", expected 0 or 1");
      }
    }
  }

  if (article.meta) {
    const SpliceMetadata& meta = *article.meta;
    const int n = article.sentence_count();
    if (meta.num_segments() < 1 || meta.num_segments() > kMaxSegments) {
      violations.push_back("meta: num_segments " +
                           std::to_string(meta.num_segments()) +
                           " outside [1," + std::to_string(kMaxSegments) + "]");
    }
    if (meta.sampling.method == SamplingMethod::kTopK && !meta.sampling.k) {
      violations.emplace_back("meta: top_k sampling without k");
    }
    if (meta.sampling.method == SamplingMethod::kTopP &&
        (!meta.sampling.p || *meta.sampling.p <= 0.0 || *meta.sampling.p > 1.0)) {
      violations.emplace_back("meta: top_p sampling needs p in (0,1]");
    }
    int previous_end = -1;
    for (std::size_t j = 0; j < meta.segments.size(); ++j) {
      const SegmentRecord& seg = meta.segments[j];
      const std::string where = "meta segment " + std::to_string(j) + ": ";
      if (seg.sent_start_idx > seg.sent_end_idx || seg.sent_start_idx < 0 ||
          seg.sent_end_idx >= n) {
        violations.push_back(where + "sentence range [" +
                             std::to_string(seg.sent_start_idx) + "," +
                             std::to_string(seg.sent_end_idx) +
                             "] is invalid for " + std::to_string(n) +
                             " sentences");
      } else {
        int tokens = 0;
        for (int i = seg.sent_start_idx; i <= seg.sent_end_idx; ++i) {
          tokens += sentences[static_cast<std::size_t>(i)].token_count;
        }
        if (tokens != seg.token_count) {
          violations.push_back(where + "token_count " +
                               std::to_string(seg.token_count) +
                               " differs from its sentences' " +
                               std::to_string(tokens));
        }
      }
      if (seg.sent_start_idx <= previous_end) {
        violations.push_back(where + "overlaps or precedes the previous segment");
      }
      previous_end = seg.sent_end_idx;
      if (seg.token_count < kMinSegmentTokens ||
          seg.token_count > kMaxSegmentTokens) {
        violations.push_back(where + "token_count " +
                             std::to_string(seg.token_count) + " outside [" +
                             std::to_string(kMinSegmentTokens) + "," +
                             std::to_string(kMaxSegmentTokens) + "]");
      }
    }
    if (article.labels && article.labels->size() == sentences.size()) {
      std::vector<int> expected(sentences.size(), kHuman);
      for (const SegmentRecord& seg : meta.segments) {
        for (int i = std::max(seg.sent_start_idx, 0);
             i <= seg.sent_end_idx && i < n; ++i) {
          expected[static_cast<std::size_t>(i)] = kMachine;
        }
      }
      if (expected != *article.labels) {
        violations.emplace_back("meta segments disagree with labels");
      }
    }
  }
  return violations;
}

}  // namespace mgtloc
