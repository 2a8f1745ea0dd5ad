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

#ifndef MGTLOC_TYPES_HPP_
#define MGTLOC_TYPES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mgtloc {

inline constexpr int kMinSegmentTokens = 40;
inline constexpr int kMaxSegmentTokens = 300;
inline constexpr int kMaxSegments = 3;

inline constexpr int kHuman = 0;
inline constexpr int kMachine = 1;

// Half-open [start, end) byte range into a UTF-8 document body.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Sentence {
  // Whitespace-normalized text of the span (runs of whitespace collapsed to a
  // single space).
  std::string text;
  CharSpan span;
  int token_count = 0;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

enum class SamplingMethod { kTopK, kTopP, kExternal };

struct Sampling {
  SamplingMethod method = SamplingMethod::kExternal;
  std::optional<int> k;
  std::optional<double> p;

  friend bool operator==(const Sampling&, const Sampling&) = default;
};

std::string_view sampling_method_name(SamplingMethod method);
SamplingMethod parse_sampling_method(std::string_view name);

// One machine-generated run inside a manipulated article. Sentence indices
// are inclusive and refer to the manipulated article.
struct SegmentRecord {
  int sent_start_idx = 0;
  int sent_end_idx = 0;
  int token_count = 0;

  friend bool operator==(const SegmentRecord&, const SegmentRecord&) = default;
};

struct SpliceMetadata {
  std::string generator_name;
  Sampling sampling;
  std::vector<SegmentRecord> segments;

  int num_segments() const { return static_cast<int>(segments.size()); }
  friend bool operator==(const SpliceMetadata&, const SpliceMetadata&) = default;
};

struct Article {
  std::string id;
  std::string title;
  std::string body;
  std::vector<Sentence> sentences;
  // 0 = human, 1 = machine; one entry per sentence when present.
  std::optional<std::vector<int>> labels;
  std::optional<SpliceMetadata> meta;

  int sentence_count() const { return static_cast<int>(sentences.size()); }
  friend bool operator==(const Article&, const Article&) = default;
};

struct SentencePrediction {
  int sentence_idx = 0;
  double score = 0.0;
  int label = 0;
  // Binarized window labels that covered this sentence.
  std::vector<int> votes;

  friend bool operator==(const SentencePrediction&,
                         const SentencePrediction&) = default;
};

// Number of whitespace-delimited tokens.
int count_tokens(std::string_view text);

// Trims and collapses every whitespace run to one ASCII space.
std::string normalize_whitespace(std::string_view text);

// Returns every invariant violation of `article`; empty means valid.
std::vector<std::string> validate_article(const Article& article);

}  // namespace mgtloc

#endif  // MGTLOC_TYPES_HPP_
