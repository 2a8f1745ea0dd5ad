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

#include "mgtloc/scorers.hpp"

#include <algorithm>

#include <cmath>

#include <spdlog/spdlog.h>

#include "mgtloc/errors.hpp"
#include "mgtloc/random.hpp"

namespace mgtloc {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

const ChunkSource& require_source(const Chunk& chunk) {
  if (!chunk.source) {
    throw UsageError("oracle scorer needs chunk provenance");
  }
  return *chunk.source;
}

}  // namespace

std::string_view score_mode_name(ScoreMode mode) {
  return mode == ScoreMode::kScore ? "score" : "feature";
}

std::string truncate_to_max_tokens(std::string_view text, int max_tokens) {
  int tokens = 0;
  bool in_token = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_space(text[i])) {
      if (in_token && tokens == max_tokens) {
        const bool more = std::any_of(text.begin() + static_cast<std::ptrdiff_t>(i),
                                      text.end(), [](char c) { return !is_space(c); });
        if (!more) break;
        spdlog::debug("truncated chunk to {} tokens", max_tokens);
        return std::string(text.substr(0, i));
      }
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++tokens;
    }
  }
  return std::string(text);
}

ChunkResult score_chunks(ChunkScorer& scorer, ChunkRequest request) {
  if (request.chunks.empty()) {
    throw UsageError("chunk request '" + request.request_id + "' is empty");
  }
  if (!scorer.supports(request.mode)) {
    throw UsageError("scorer '" + scorer.name() + "' does not support mode '" +
                     std::string(score_mode_name(request.mode)) + "'");
  }
  for (Chunk& chunk : request.chunks) {
    std::string truncated = truncate_to_max_tokens(chunk.text);
    if (truncated.size() != chunk.text.size()) {
      chunk.text = std::move(truncated);
      if (chunk.source) {
        auto& offsets = chunk.source->sentence_offsets;
        std::erase_if(offsets, [&](std::size_t off) {
          return off >= chunk.text.size();
        });
      }
    }
  }

  ChunkResult result = scorer.score(request);
  const std::string where =
      "scorer '" + scorer.name() + "', request '" + request.request_id + "'";
  const std::size_t n = request.chunks.size();
  if (request.mode == ScoreMode::kScore) {
    if (result.scores.size() != n) {
      throw ProtocolError(where + ": expected " + std::to_string(n) +
                          " scores, got " +
                          std::to_string(result.scores.size()));
    }
    for (double s : result.scores) {
      if (!(s >= 0.0 && s <= 1.0)) {
        throw ProtocolError(where + ": score " + std::to_string(s) +
                            " outside [0,1]");
      }
    }
  } else {
    if (result.features.size() != n) {
      throw ProtocolError(where + ": expected " + std::to_string(n) +
                          " feature vectors, got " +
                          std::to_string(result.features.size()));
    }
    for (const auto& f : result.features) {
      if (f.size() != scorer.feature_dim()) {
        throw ProtocolError(where + ": feature dimension " +
                            std::to_string(f.size()) + " != " +
                            std::to_string(scorer.feature_dim()));
      }
      for (double v : f) {
        if (!std::isfinite(v)) {
          throw ProtocolError(where + ": non-finite feature value");
        }
      }
    }
  }
  result.request_id = request.request_id;
  return result;
}

Chunk make_chunk(const Article& article, int first, int last) {
  if (first < 0 || last < first || last >= article.sentence_count()) {
    throw UsageError("chunk range [" + std::to_string(first) + "," +
                     std::to_string(last) + "] is invalid for article '" +
                     article.id + "'");
  }
  Chunk chunk;
  ChunkSource source;
  source.article_id = article.id;
  source.first_sentence = first;
  source.last_sentence = last;
  for (int i = first; i <= last; ++i) {
    if (i > first) chunk.text.push_back(' ');
    source.sentence_offsets.push_back(chunk.text.size());
    chunk.text += article.sentences[static_cast<std::size_t>(i)].text;
  }
  chunk.source = std::move(source);
  return chunk;
}

OracleScorer::OracleScorer(std::span<const Article> truth,
                           std::size_t feature_dim)
    : feature_dim_(feature_dim) {
  for (const Article& a : truth) {
    if (!a.labels) {
      throw DataError("oracle scorer: article '" + a.id + "' has no labels");
    }
    Entry entry;
    entry.labels = *a.labels;
    for (const Sentence& s : a.sentences) entry.tokens.push_back(s.token_count);
    truth_.insert_or_assign(a.id, std::move(entry));
  }
}

ChunkResult OracleScorer::score(const ChunkRequest& request) {
  ChunkResult result;
  for (const Chunk& chunk : request.chunks) {
    const ChunkSource& src = require_source(chunk);
    const auto it = truth_.find(src.article_id);
    if (it == truth_.end()) {
      throw DataError("oracle scorer: unknown article '" + src.article_id +
                      "'");
    }
    const Entry& e = it->second;
    if (src.first_sentence < 0 || src.last_sentence < src.first_sentence ||
        src.last_sentence >= static_cast<int>(e.labels.size())) {
      throw DataError("oracle scorer: sentence range out of bounds for '" +
                      src.article_id + "'");
    }
    if (request.mode == ScoreMode::kScore) {
      double machine = 0.0;
      double total = 0.0;
      for (int i = src.first_sentence; i <= src.last_sentence; ++i) {
        const auto k = static_cast<std::size_t>(i);
        total += e.tokens[k];
        if (e.labels[k] == kMachine) machine += e.tokens[k];
      }
      result.scores.push_back(total > 0.0 ? machine / total : 0.0);
    } else {
      std::vector<double> feature(feature_dim_, 0.0);
      for (int i = src.first_sentence; i <= src.last_sentence; ++i) {
        const auto j = static_cast<std::size_t>(i - src.first_sentence);
        if (j < feature_dim_) {
          feature[j] = e.labels[static_cast<std::size_t>(i)];
        }
      }
      result.features.push_back(std::move(feature));
    }
  }
  return result;
}

ChunkResult ConstantScorer::score(const ChunkRequest& request) {
  ChunkResult result;
  result.scores.assign(request.chunks.size(), value_);
  return result;
}

ChunkResult RandomScorer::score(const ChunkRequest& request) {
  ChunkResult result;
  for (const Chunk& chunk : request.chunks) {
    const std::uint64_t bits = derive_seed(seed_, chunk.text);
    result.scores.push_back(static_cast<double>(bits >> 11) * 0x1.0p-53);
  }
  return result;
}

}  // namespace mgtloc
