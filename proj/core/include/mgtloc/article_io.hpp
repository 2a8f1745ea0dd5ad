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

#ifndef MGTLOC_ARTICLE_IO_HPP_
#define MGTLOC_ARTICLE_IO_HPP_

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgtloc/types.hpp"

namespace mgtloc {

// JSONL article format, one object per line:
//   {"id", "title", "body",
//    "sentences": [{"text", "start", "end", "tokens"}],
//    "labels": [0|1, ...],                       (optional)
//    "meta": {"generator", "sampling": {"method", "k", "p"},
//             "segments": [{"sent_start_idx", "sent_end_idx",
//                           "token_count"}]}}    (optional)
// Offsets are byte offsets into the UTF-8 body.
std::string encode_article(const Article& article);

// Throws DataError on malformed JSON or missing required keys. When
// `segment_if_missing` is set and the line has no "sentences", the body is
// run through the default segmenter.
Article decode_article(std::string_view line, bool segment_if_missing = true);

std::string encode_splice_metadata_json(const SpliceMetadata& meta);

// Calls `fn(line, line_number)` for every non-blank line; line numbers are
// 1-based. Throws DataError when the file cannot be opened.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, int)>& fn);

// Errors name the file and line.
std::vector<Article> read_articles(const std::filesystem::path& path,
                                   bool segment_if_missing = true);

void write_lines(const std::filesystem::path& path,
                 std::span<const std::string> lines);
void write_articles(const std::filesystem::path& path,
                    std::span<const Article> articles);

}  // namespace mgtloc

#endif  // MGTLOC_ARTICLE_IO_HPP_
