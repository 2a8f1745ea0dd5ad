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

#ifndef MGTLOC_SCORERS_HPP_
#define MGTLOC_SCORERS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgtloc/types.hpp"

namespace mgtloc {

inline constexpr std::size_t kDefaultFeatureDim = 1024;
inline constexpr int kMaxChunkTokens = 512;

enum class ScoreMode { kScore, kFeature };

std::string_view score_mode_name(ScoreMode mode);

// Where a chunk came from. External scorers never see this; in-process
// scorers (the oracle, the n-gram feature extractor) may use it.
struct ChunkSource {
  std::string article_id;
  int first_sentence = 0;
  int last_sentence = 0;  // inclusive
  // Byte offset of every sentence start inside the chunk text.
  std::vector<std::size_t> sentence_offsets;
};

struct Chunk {
  std::string text;
  std::optional<ChunkSource> source;
};

struct ChunkRequest {
  std::string request_id;
  std::vector<Chunk> chunks;
  ScoreMode mode = ScoreMode::kScore;
};

struct ChunkResult {
  std::string request_id;
  std::vector<double> scores;                 // mode = score
  std::vector<std::vector<double>> features;  // mode = feature
};

// Maps chunk text to a machine-class probability or a feature vector.
// Implementations must be pure functions of their state and the text.
class ChunkScorer {
 public:
  virtual ~ChunkScorer() = default;

  virtual std::string name() const = 0;
  virtual bool supports(ScoreMode mode) const = 0;
  virtual std::size_t feature_dim() const { return kDefaultFeatureDim; }

  // Called through score_chunks(), which validates the request and result.
  virtual ChunkResult score(const ChunkRequest& request) = 0;
};

// Keeps the first `max_tokens` whitespace tokens (original spacing inside the
// kept prefix is preserved). Idempotent.
std::string truncate_to_max_tokens(std::string_view text,
                                   int max_tokens = kMaxChunkTokens);

// Validates the request, truncates every chunk to kMaxChunkTokens, runs the
// scorer and checks the result against the length/range/dimension contract.
// Throws UsageError for bad requests and ProtocolError for bad results.
ChunkResult score_chunks(ChunkScorer& scorer, ChunkRequest request);

// Chunk text for sentences [first, last] of `article`: sentence texts joined
// by a single space, with provenance attached. Throws UsageError for an
// invalid range.
Chunk make_chunk(const Article& article, int first, int last);

// Ground-truth scorer. A chunk's score is the fraction of its whitespace
// tokens that belong to machine sentences; its feature vector holds, at index
// j, the label of the j-th sentence of the chunk (zeros elsewhere). Requires
// chunk provenance and labelled articles.
class OracleScorer final : public ChunkScorer {
 public:
  explicit OracleScorer(std::span<const Article> truth,
                        std::size_t feature_dim = kDefaultFeatureDim);

  std::string name() const override { return "oracle"; }
  bool supports(ScoreMode) const override { return true; }
  std::size_t feature_dim() const override { return feature_dim_; }
  ChunkResult score(const ChunkRequest& request) override;

 private:
  struct Entry {
    std::vector<int> labels;
    std::vector<int> tokens;
  };
  std::map<std::string, Entry, std::less<>> truth_;
  std::size_t feature_dim_;
};

// Returns the same probability for every chunk.
class ConstantScorer final : public ChunkScorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}

  std::string name() const override { return "constant"; }
  bool supports(ScoreMode mode) const override {
    return mode == ScoreMode::kScore;
  }
  ChunkResult score(const ChunkRequest& request) override;

 private:
  double value_;
};

// Uniform pseudo-random probability derived from (seed, text).
class RandomScorer final : public ChunkScorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}

  std::string name() const override { return "random"; }
  bool supports(ScoreMode mode) const override {
    return mode == ScoreMode::kScore;
  }
  ChunkResult score(const ChunkRequest& request) override;

 private:
  std::uint64_t seed_;
};

}  // namespace mgtloc

#endif  // MGTLOC_SCORERS_HPP_
