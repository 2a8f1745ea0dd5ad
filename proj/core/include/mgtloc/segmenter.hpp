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

#ifndef MGTLOC_SEGMENTER_HPP_
#define MGTLOC_SEGMENTER_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mgtloc/types.hpp"

namespace mgtloc {

// Rule set for the sentence splitter.
//
// A boundary is placed after a run of `.`, `!` or `?` (optionally followed by
// closing quotes or brackets) when the run is followed by whitespace or the
// end of the text, and at every paragraph break (two newlines separated only
// by horizontal whitespace). A run consisting only of periods is not a
// boundary when the token before it is in `abbreviations`, and no run is a
// boundary when the next non-space character is a lowercase ASCII letter.
// Fragments with fewer than `min_sentence_chars` non-space bytes are merged
// into their neighbour.
struct SegmenterConfig {
  // Lowercase, without the trailing period; internal periods are kept.
  std::set<std::string, std::less<>> abbreviations;
  std::size_t min_sentence_chars = 2;

  // Built-in list shipped in data/abbreviations.txt.
  static const SegmenterConfig& defaults();
};

// Parses an abbreviation list: one entry per line, `#` starts a comment.
// Entries are lowercased and a trailing period is dropped.
std::set<std::string, std::less<>> parse_abbreviation_list(std::istream& in);
std::set<std::string, std::less<>> load_abbreviation_file(
    const std::filesystem::path& path);

// Splits `text` into sentences with byte spans into `text`. Whitespace-only
// input yields an empty list.
std::vector<Sentence> segment(
    std::string_view text,
    const SegmenterConfig& config = SegmenterConfig::defaults());

// A sentence suitable for splicing into an article: starts with an uppercase
// ASCII letter, a digit or an opening quote, ends with terminal punctuation
// (closing quotes/brackets may follow), and has at least three tokens.
bool well_formed(const Sentence& sentence);

}  // namespace mgtloc

#endif  // MGTLOC_SEGMENTER_HPP_
