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

#include "mgtloc/article_io.hpp"

#include <fstream>

#include "json_util.hpp"
#include "mgtloc/errors.hpp"
#include "mgtloc/segmenter.hpp"

namespace mgtloc {
namespace {

using detail::Json;

Json meta_to_json(const SpliceMetadata& meta) {
  Json j;
  j["generator"] = meta.generator_name;
  j["sampling"] = detail::sampling_to_json(meta.sampling);
  Json segments = Json::array();
  for (const SegmentRecord& seg : meta.segments) {
    segments.push_back({{"sent_start_idx", seg.sent_start_idx},
                        {"sent_end_idx", seg.sent_end_idx},
                        {"token_count", seg.token_count}});
  }
  j["segments"] = std::move(segments);
  return j;
}

SpliceMetadata meta_from_json(const Json& j, std::string_view what) {
  SpliceMetadata meta;
  meta.generator_name = detail::require_as<std::string>(j, "generator", what);
  if (const auto it = j.find("sampling"); it != j.end()) {
    meta.sampling = detail::sampling_from_json(*it, what);
  }
  for (const Json& seg : detail::require(j, "segments", what)) {
    meta.segments.push_back(
        {detail::require_as<int>(seg, "sent_start_idx", what),
         detail::require_as<int>(seg, "sent_end_idx", what),
         detail::require_as<int>(seg, "token_count", what)});
  }
  return meta;
}

}  // namespace

std::string encode_splice_metadata_json(const SpliceMetadata& meta) {
  return detail::dump_line(meta_to_json(meta));
}

std::string encode_article(const Article& article) {
  Json j;
  j["id"] = article.id;
  j["title"] = article.title;
  j["body"] = article.body;
  Json sentences = Json::array();
  for (const Sentence& s : article.sentences) {
    sentences.push_back({{"text", s.text},
                         {"start", s.span.start},
                         {"end", s.span.end},
                         {"tokens", s.token_count}});
  }
  j["sentences"] = std::move(sentences);
  if (article.labels) j["labels"] = *article.labels;
  if (article.meta) j["meta"] = meta_to_json(*article.meta);
  return detail::dump_line(j);
}

Article decode_article(std::string_view line, bool segment_if_missing) {
  const Json j = detail::parse_json(line, "article");
  Article article;
  article.id = detail::require_as<std::string>(j, "id", "article");
  const std::string what = "article '" + article.id + "'";
  if (const auto it = j.find("title"); it != j.end() && !it->is_null()) {
    article.title = detail::get_as<std::string>(*it, "title", what);
  }
  article.body = detail::require_as<std::string>(j, "body", what);

  const auto sentences = j.find("sentences");
  if (sentences != j.end() && !sentences->is_null()) {
    for (const Json& s : *sentences) {
      Sentence sentence;
      sentence.text = detail::require_as<std::string>(s, "text", what);
      sentence.span.start = detail::require_as<std::size_t>(s, "start", what);
      sentence.span.end = detail::require_as<std::size_t>(s, "end", what);
      if (const auto t = s.find("tokens"); t != s.end()) {
        sentence.token_count = detail::get_as<int>(*t, "tokens", what);
      } else {
        sentence.token_count = count_tokens(sentence.text);
      }
      article.sentences.push_back(std::move(sentence));
    }
  } else if (segment_if_missing) {
    article.sentences = segment(article.body);
  }

  if (const auto it = j.find("labels"); it != j.end() && !it->is_null()) {
    article.labels = detail::get_as<std::vector<int>>(*it, "labels", what);
  }
  if (const auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    article.meta = meta_from_json(*it, what + " meta");
  }
  return article;
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, int)>& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(line, number);
  }
}

std::vector<Article> read_articles(const std::filesystem::path& path,
                                   bool segment_if_missing) {
  std::vector<Article> articles;
  for_each_line(path, [&](std::string_view line, int number) {
    try {
      articles.push_back(decode_article(line, segment_if_missing));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(number) + ": " +
                      e.what());
    }
  });
  return articles;
}

void write_lines(const std::filesystem::path& path,
                 std::span<const std::string> lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const std::string& line : lines) out << line << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

void write_articles(const std::filesystem::path& path,
                    std::span<const Article> articles) {
  std::vector<std::string> lines;
  lines.reserve(articles.size());
  for (const Article& a : articles) lines.push_back(encode_article(a));
  write_lines(path, lines);
}

}  // namespace mgtloc
