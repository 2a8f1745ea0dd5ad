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

#include "mgtloc/synthesis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "json_util.hpp"
#include "mgtloc/article_io.hpp"
#include "mgtloc/parallel.hpp"
#include "mgtloc/segmenter.hpp"

namespace mgtloc {
namespace {

using detail::Json;

// Well-formed pool sentences, drawn lazily from candidate entries starting
// at a random one and wrapping around once.
class SentenceStream {
 public:
  SentenceStream(std::vector<const PoolEntry*> entries, std::size_t first)
      : entries_(std::move(entries)), next_entry_(first) {}

  const Sentence* peek() {
    while (pos_ == buffer_.size()) {
      if (consumed_entries_ == entries_.size()) return nullptr;
      buffer_.clear();
      pos_ = 0;
      for (Sentence& s : segment(entries_[next_entry_]->text)) {
        if (well_formed(s)) buffer_.push_back(std::move(s));
      }
      next_entry_ = (next_entry_ + 1) % entries_.size();
      ++consumed_entries_;
    }
    return &buffer_[pos_];
  }

  void advance() { ++pos_; }

 private:
  std::vector<const PoolEntry*> entries_;
  std::size_t next_entry_;
  std::size_t consumed_entries_ = 0;
  std::vector<Sentence> buffer_;
  std::size_t pos_ = 0;
};

struct MachineRun {
  std::vector<Sentence> sentences;
  int tokens = 0;
};

struct Placement {
  int start = 0;  // first replaced human sentence (insert: insertion point)
  int length = 0;  // replaced human sentences; 0 in insert mode
  std::size_t run = 0;
};

MachineRun take_run(SentenceStream& stream, int budget, int min_tokens,
                    int max_tokens) {
  MachineRun run;
  while (run.tokens < budget) {
    const Sentence* s = stream.peek();
    if (s == nullptr) break;
    if (run.tokens + s->token_count > max_tokens) break;
    run.tokens += s->token_count;
    run.sentences.push_back(*s);
    stream.advance();
  }
  if (run.tokens < min_tokens) {
    throw SkipError(stream.peek() == nullptr
                        ? "pool text too short for a segment"
                        : "no sentence run fits the segment token bounds");
  }
  return run;
}

std::vector<const PoolEntry*> candidate_entries(const GenerationPool& pool,
                                                const std::string& human_id) {
  std::vector<const PoolEntry*> matching;
  std::vector<const PoolEntry*> generic;
  for (const PoolEntry& e : pool.entries) {
    if (e.source_article_id == human_id) {
      matching.push_back(&e);
    } else if (e.source_article_id.empty()) {
      generic.push_back(&e);
    }
  }
  return matching.empty() ? generic : matching;
}

std::vector<Placement> place(const Article& human,
                             const std::vector<MachineRun>& runs,
                             const SynthesisConfig& config, Rng& rng) {
  const int n = human.sentence_count();
  const int gap = config.min_human_gap;
  const bool insert = config.mode == SpliceMode::kInsert;
  std::vector<long> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + human.sentences[i].token_count;
  }

  // Candidate human ranges for every run.
  std::vector<std::vector<Placement>> candidates(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double lo = 0.5 * runs[r].tokens;
    const double hi = 1.5 * runs[r].tokens;
    for (int s = gap; s <= n - gap; ++s) {
      if (insert) {
        candidates[r].push_back({s, 0, r});
        continue;
      }
      for (int len = 1; s + len <= n - gap; ++len) {
        const long tokens = prefix[s + len] - prefix[s];
        if (tokens > hi) break;
        if (tokens >= lo) candidates[r].push_back({s, len, r});
      }
    }
    if (candidates[r].empty()) {
      throw SkipError("no human range within 50% of the segment length");
    }
  }

  for (int attempt = 0; attempt < config.placement_attempts; ++attempt) {
    std::vector<Placement> chosen;
    for (const auto& c : candidates) chosen.push_back(c[rng.below(c.size())]);
    std::sort(chosen.begin(), chosen.end(),
              [](const Placement& a, const Placement& b) { return a.start < b.start; });
    bool ok = true;
    for (std::size_t i = 1; i < chosen.size() && ok; ++i) {
      const int prev_end = chosen[i - 1].start + chosen[i - 1].length;
      ok = chosen[i].start - prev_end >= gap;
    }
    if (ok) return chosen;
  }
  throw SkipError("no segment placement keeps the required human gaps");
}

Article assemble(const Article& human, const GenerationPool& pool,
                 const std::vector<MachineRun>& runs,
                 const std::vector<Placement>& placements) {
  Article out;
  out.id = human.id + "::" + pool.generator_name;
  out.title = human.title;
  std::vector<int> labels;
  SpliceMetadata meta;
  meta.generator_name = pool.generator_name;
  meta.sampling = pool.sampling;

  const std::string& body = human.body;
  std::size_t cursor = 0;
  auto copy_until = [&](std::size_t pos) {
    out.body.append(body, cursor, pos - cursor);
    cursor = pos;
  };
  auto emit_human = [&](int i) {
    const Sentence& s = human.sentences[i];
    copy_until(s.span.start);
    const std::size_t start = out.body.size();
    copy_until(s.span.end);
    out.sentences.push_back({s.text, {start, out.body.size()}, s.token_count});
    labels.push_back(kHuman);
  };
  auto emit_machine = [&](const MachineRun& run, bool trailing_space) {
    SegmentRecord record;
    record.sent_start_idx = static_cast<int>(out.sentences.size());
    for (std::size_t j = 0; j < run.sentences.size(); ++j) {
      if (j > 0) out.body += ' ';
      const std::size_t start = out.body.size();
      out.body += run.sentences[j].text;
      out.sentences.push_back({run.sentences[j].text,
                               {start, out.body.size()},
                               run.sentences[j].token_count});
      labels.push_back(kMachine);
    }
    if (trailing_space) out.body += ' ';
    record.sent_end_idx = static_cast<int>(out.sentences.size()) - 1;
    record.token_count = run.tokens;
    meta.segments.push_back(record);
  };

  std::size_t next = 0;
  for (int i = 0; i < human.sentence_count();) {
    if (next < placements.size() && placements[next].start == i) {
      const Placement& p = placements[next++];
      copy_until(human.sentences[i].span.start);
      if (p.length == 0) {
        emit_machine(runs[p.run], true);
        continue;
      }
      emit_machine(runs[p.run], false);
      cursor = human.sentences[i + p.length - 1].span.end;
      i += p.length;
      continue;
    }
    emit_human(i++);
  }
  copy_until(body.size());

  out.labels = std::move(labels);
  out.meta = std::move(meta);
  return out;
}

std::string pool_key(const Sampling& s) {
  return detail::dump_line(detail::sampling_to_json(s));
}

}  // namespace

void SynthesisConfig::validate() const {
  if (num_segments && (*num_segments < 1 || *num_segments > kMaxSegments)) {
    throw UsageError("number of segments must be in [1, 3]");
  }
  if (min_segment_tokens < kMinSegmentTokens ||
      max_segment_tokens > kMaxSegmentTokens ||
      min_segment_tokens > max_segment_tokens) {
    throw UsageError("segment token bounds must satisfy 40 <= min <= max <= 300");
  }
  if (min_human_gap < 1) throw UsageError("min_human_gap must be at least 1");
  if (placement_attempts < 1) {
    throw UsageError("placement_attempts must be at least 1");
  }
}

Article splice(const Article& human, const GenerationPool& pool,
               const SynthesisConfig& config, Rng& rng) {
  config.validate();
  const int k = config.num_segments ? *config.num_segments
                                    : rng.uniform_int(1, kMaxSegments);
  const int n = human.sentence_count();
  const int gap = config.min_human_gap;
  const int needed = std::max(
      k + 2, (k + 1) * gap + (config.mode == SpliceMode::kReplace ? k : 0));
  if (n < needed) {
    throw SkipError("article has " + std::to_string(n) + " sentences, " +
                    std::to_string(k) + " segments need " +
                    std::to_string(needed));
  }

  std::vector<const PoolEntry*> entries = candidate_entries(pool, human.id);
  if (entries.empty()) throw SkipError("no pool entry for this article");
  SentenceStream stream(entries, rng.below(entries.size()));

  const int total = rng.uniform_int(config.min_segment_tokens,
                                    config.max_segment_tokens);
  const int budget = std::max(config.min_segment_tokens, total / k);
  std::vector<MachineRun> runs;
  for (int j = 0; j < k; ++j) {
    runs.push_back(take_run(stream, budget, config.min_segment_tokens,
                            config.max_segment_tokens));
  }
  return assemble(human, pool, runs, place(human, runs, config, rng));
}

Dataset build_dataset(std::span<const Article> human_corpus,
                      std::span<const GenerationPool> pools,
                      const SynthesisConfig& config, int threads) {
  config.validate();
  if (human_corpus.empty()) throw DataError("human corpus is empty");
  if (pools.empty()) throw UsageError("at least one generation pool is required");
  std::set<std::string> names;
  for (const GenerationPool& p : pools) {
    if (!names.insert(p.generator_name).second) {
      throw UsageError("duplicate generator '" + p.generator_name + "' in pools");
    }
    if (p.entries.empty()) {
      throw DataError("pool '" + p.generator_name + "' has no entries");
    }
  }
  std::set<std::string_view> ids;
  for (const Article& a : human_corpus) {
    if (!ids.insert(a.id).second) {
      throw DataError("duplicate human article id '" + a.id + "'");
    }
  }

  const std::size_t n = human_corpus.size();
  std::vector<std::optional<Article>> produced(n * pools.size());
  std::vector<std::string> skips(produced.size());
  parallel_for(produced.size(), threads, [&](std::size_t task) {
    const GenerationPool& pool = pools[task / n];
    const Article& human = human_corpus[task % n];
    Rng rng(derive_seed(config.rng_seed, human.id + '\x1f' + pool.generator_name));
    try {
      produced[task] = splice(human, pool, config, rng);
    } catch (const SkipError& e) {
      skips[task] = e.what();
    }
  });

  Dataset dataset;
  DatasetStats& stats = dataset.stats;
  std::array<std::int64_t, kMaxSegments> tokens_by_k{};
  std::array<std::int64_t, kMaxSegments> segments_by_k{};
  for (std::size_t p = 0; p < pools.size(); ++p) {
    PoolStats ps;
    ps.generator_name = pools[p].generator_name;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t task = p * n + i;
      if (!produced[task]) {
        ++ps.skipped;
        ++ps.skip_reasons[skips[task]];
        spdlog::debug("skipped '{}' with pool '{}': {}", human_corpus[i].id,
                      ps.generator_name, skips[task]);
        continue;
      }
      ++ps.produced;
      Article& a = *produced[task];
      const int k = a.meta->num_segments();
      ++stats.segment_count_histogram[k - 1];
      for (const SegmentRecord& seg : a.meta->segments) {
        const int bin = std::min(kLengthBins - 1,
                                 (seg.token_count - kMinSegmentTokens) / kLengthBinWidth);
        ++stats.segment_length_histogram[bin];
        tokens_by_k[k - 1] += seg.token_count;
        ++segments_by_k[k - 1];
      }
      stats.sentences += a.sentence_count();
      for (int label : *a.labels) stats.machine_sentences += label;
      dataset.articles.push_back(std::move(a));
    }
    if (ps.produced == 0) {
      stats.warnings.push_back("pool '" + ps.generator_name +
                               "' produced no articles (" +
                               std::to_string(ps.skipped) + " skipped)");
      spdlog::warn("{}", stats.warnings.back());
    }
    stats.pools.push_back(std::move(ps));
  }
  stats.articles = static_cast<int>(dataset.articles.size());
  for (int k = 0; k < kMaxSegments; ++k) {
    if (segments_by_k[k] > 0) {
      stats.mean_segment_tokens[k] = static_cast<double>(tokens_by_k[k]) /
                                     static_cast<double>(segments_by_k[k]);
    }
  }
  if (stats.sentences > 0) {
    stats.prevalence = static_cast<double>(stats.machine_sentences) /
                       static_cast<double>(stats.sentences);
  }
  std::sort(dataset.articles.begin(), dataset.articles.end(),
            [](const Article& a, const Article& b) { return a.id < b.id; });
  return dataset;
}

std::string DatasetStats::to_json() const {
  Json j;
  j["articles"] = articles;
  Json pool_list = Json::array();
  for (const PoolStats& p : pools) {
    pool_list.push_back({{"generator", p.generator_name},
                         {"produced", p.produced},
                         {"skipped", p.skipped},
                         {"skip_reasons", p.skip_reasons}});
  }
  j["pools"] = std::move(pool_list);
  Json counts = Json::object();
  for (int k = 0; k < kMaxSegments; ++k) {
    counts[std::to_string(k + 1)] = segment_count_histogram[k];
  }
  j["segment_count_histogram"] = std::move(counts);
  Json lengths = Json::array();
  for (int b = 0; b < kLengthBins; ++b) {
    const int lo = kMinSegmentTokens + b * kLengthBinWidth;
    const int hi = b + 1 == kLengthBins ? kMaxSegmentTokens : lo + kLengthBinWidth - 1;
    lengths.push_back({{"min", lo}, {"max", hi}, {"count", segment_length_histogram[b]}});
  }
  j["segment_length_histogram"] = std::move(lengths);
  Json means = Json::object();
  for (int k = 0; k < kMaxSegments; ++k) {
    means[std::to_string(k + 1)] = mean_segment_tokens[k];
  }
  j["mean_segment_tokens"] = std::move(means);
  j["sentences"] = sentences;
  j["machine_sentences"] = machine_sentences;
  j["prevalence"] = prevalence;
  j["warnings"] = warnings;
  return j.dump(2);
}

std::vector<GenerationPool> read_pool_file(const std::filesystem::path& path) {
  std::vector<GenerationPool> pools;
  std::map<std::string, std::size_t> index;
  for_each_line(path, [&](std::string_view line, int number) {
    const std::string what = path.string() + ":" + std::to_string(number);
    const Json j = detail::parse_json(line, what);
    const auto generator = detail::require_as<std::string>(j, "generator", what);
    Sampling sampling;
    if (const auto it = j.find("sampling"); it != j.end()) {
      sampling = detail::sampling_from_json(*it, what);
    }
    PoolEntry entry;
    if (const auto it = j.find("source_article_id"); it != j.end() && !it->is_null()) {
      entry.source_article_id = detail::get_as<std::string>(*it, "source_article_id", what);
    }
    entry.text = detail::require_as<std::string>(j, "text", what);

    const auto [it, inserted] = index.emplace(generator, pools.size());
    if (inserted) {
      pools.push_back({generator, sampling, {}});
    } else if (pool_key(pools[it->second].sampling) != pool_key(sampling)) {
      throw DataError(what + ": generator '" + generator +
                      "' listed with a different sampling descriptor");
    }
    pools[it->second].entries.push_back(std::move(entry));
  });
  if (pools.empty()) throw DataError(path.string() + ": pool file is empty");
  return pools;
}

std::string encode_pool_entry(const GenerationPool& pool, const PoolEntry& entry) {
  Json j;
  j["generator"] = pool.generator_name;
  j["sampling"] = detail::sampling_to_json(pool.sampling);
  j["source_article_id"] = entry.source_article_id;
  j["text"] = entry.text;
  return detail::dump_line(j);
}

}  // namespace mgtloc
