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

#ifndef MGTLOC_SYNTHESIS_HPP_
#define MGTLOC_SYNTHESIS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgtloc/errors.hpp"
#include "mgtloc/random.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc {

struct PoolEntry {
  // Human article the text continues; empty for generic material usable with
  // any article.
  std::string source_article_id;
  std::string text;
};

struct GenerationPool {
  std::string generator_name;
  Sampling sampling;
  std::vector<PoolEntry> entries;
};

enum class SpliceMode { kReplace, kInsert };

struct SynthesisConfig {
  // Fixed segment count, or uniform over 1..3 when unset.
  std::optional<int> num_segments;
  int min_segment_tokens = kMinSegmentTokens;
  int max_segment_tokens = kMaxSegmentTokens;
  std::uint64_t rng_seed = 0;
  SpliceMode mode = SpliceMode::kReplace;
  // Human sentences required between two segments and before the first /
  // after the last segment.
  int min_human_gap = 2;
  int placement_attempts = 64;

  // Throws UsageError when a field is out of range.
  void validate() const;
};

// A human article could not be turned into a manipulated one.
class SkipError : public DataError {
 public:
  using DataError::DataError;
};

// Splices machine segments into `human`.
//
// Segment count k comes from the config. A total budget T is drawn uniformly
// from [min, max] tokens and each segment gets max(min, T / k); a segment is
// a run of consecutive well-formed pool sentences accumulated until the
// budget is reached, dropping the last sentence if that overshoots max.
// Pool entries whose source_article_id equals the human id are used, falling
// back to generic entries. In replace mode each segment replaces a
// contiguous human range whose token count lies within +-50% of the
// segment's; in insert mode segments go between human sentences. Segments
// keep `min_human_gap` human sentences between each other and the article
// edges. The output id is "<human id>::<generator>".
//
// Throws SkipError when the article is too short, the pool has no usable
// entry, no run fits the token bounds or no placement satisfies the gaps.
Article splice(const Article& human, const GenerationPool& pool,
               const SynthesisConfig& config, Rng& rng);

inline constexpr int kLengthBinWidth = 20;
inline constexpr int kLengthBins =
    (kMaxSegmentTokens - kMinSegmentTokens) / kLengthBinWidth;

struct PoolStats {
  std::string generator_name;
  int produced = 0;
  int skipped = 0;
  // Skip reasons with their counts.
  std::map<std::string, int> skip_reasons;
};

struct DatasetStats {
  std::vector<PoolStats> pools;
  int articles = 0;
  // Index k-1 counts articles with k segments.
  std::array<int, kMaxSegments> segment_count_histogram{};
  // Segment token counts in 20-token bins from 40; 300 falls in the last bin.
  std::array<int, kLengthBins> segment_length_histogram{};
  // Mean segment token count among articles with k segments (index k-1);
  // zero when there are none.
  std::array<double, kMaxSegments> mean_segment_tokens{};
  std::int64_t sentences = 0;
  std::int64_t machine_sentences = 0;
  double prevalence = 0.0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

struct Dataset {
  std::vector<Article> articles;  // sorted by id
  DatasetStats stats;
};

// One manipulated article per (human article, pool) pair. Each pair draws
// from its own substream derived from (seed, human id, generator), so the
// result does not depend on `threads`. Throws DataError for an empty corpus
// and UsageError for no pools or duplicate generator names.
Dataset build_dataset(std::span<const Article> human_corpus,
                      std::span<const GenerationPool> pools,
                      const SynthesisConfig& config, int threads = 1);

// Pool JSONL: {"generator", "sampling": {"method", "k", "p"},
//              "source_article_id", "text"} per line. Lines are grouped into
// pools by generator in order of first appearance; a generator listed with
// two different sampling descriptors is a DataError.
std::vector<GenerationPool> read_pool_file(const std::filesystem::path& path);

std::string encode_pool_entry(const GenerationPool& pool, const PoolEntry& entry);

}  // namespace mgtloc

#endif  // MGTLOC_SYNTHESIS_HPP_
