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

#include "mgtloc/segmenter.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "mgtloc/errors.hpp"

namespace mgtloc {
namespace {

#include "mgtloc/default_abbreviations.inc"

constexpr std::array<std::string_view, 3> kClosingMultibyte = {
    "\xE2\x80\x9D", "\xE2\x80\x99", "\xC2\xBB"};
constexpr std::array<std::string_view, 3> kOpeningMultibyte = {
    "\xE2\x80\x9C", "\xE2\x80\x98", "\xC2\xAB"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Length of the closing quote/bracket starting at `pos`, or 0.
std::size_t closing_length(std::string_view text, std::size_t pos) {
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') return 1;
  for (std::string_view q : kClosingMultibyte) {
    if (text.substr(pos, q.size()) == q) return q.size();
  }
  return 0;
}

// Length of the opening quote/bracket starting at `pos`, or 0.
std::size_t opening_length(std::string_view text, std::size_t pos) {
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == '(' || c == '[' || c == '{') return 1;
  for (std::string_view q : kOpeningMultibyte) {
    if (text.substr(pos, q.size()) == q) return q.size();
  }
  return 0;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Token that ends right before `period_pos`, with leading openers removed.
std::string token_before(std::string_view text, std::size_t period_pos) {
  std::size_t begin = period_pos;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  while (begin < period_pos) {
    const std::size_t n = opening_length(text, begin);
    if (n == 0) break;
    begin += n;
  }
  return to_lower(text.substr(begin, period_pos - begin));
}

// Paragraph break starting at `pos` ('\n', horizontal space, '\n').
// Returns the position after the second newline, or 0 when absent.
std::size_t paragraph_break_end(std::string_view text, std::size_t pos) {
  if (text[pos] != '\n') return 0;
  std::size_t j = pos + 1;
  while (j < text.size() &&
         (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) {
    ++j;
  }
  if (j < text.size() && text[j] == '\n') return j + 1;
  return 0;
}

std::size_t skip_space(std::string_view text, std::size_t pos) {
  while (pos < text.size() && is_space(text[pos])) ++pos;
  return pos;
}

std::size_t trim_back(std::string_view text, std::size_t begin,
                      std::size_t end) {
  while (end > begin && is_space(text[end - 1])) --end;
  return end;
}

std::size_t non_space_bytes(std::string_view text, CharSpan span) {
  std::size_t n = 0;
  for (std::size_t i = span.start; i < span.end; ++i) {
    if (!is_space(text[i])) ++n;
  }
  return n;
}

Sentence make_sentence(std::string_view text, CharSpan span) {
  Sentence s;
  s.span = span;
  s.text = normalize_whitespace(text.substr(span.start, span.size()));
  s.token_count = count_tokens(s.text);
  return s;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

const SegmenterConfig& SegmenterConfig::defaults() {
  static const SegmenterConfig config = [] {
    SegmenterConfig c;
    std::string data(kDefaultAbbreviations);
    std::istringstream in(data);
    c.abbreviations = parse_abbreviation_list(in);
    return c;
  }();
  return config;
}

std::set<std::string, std::less<>> parse_abbreviation_list(std::istream& in) {
  std::set<std::string, std::less<>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::string entry = to_lower(trim(line));
    while (!entry.empty() && entry.back() == '.') entry.pop_back();
    if (!entry.empty()) entries.insert(std::move(entry));
  }
  return entries;
}

std::set<std::string, std::less<>> load_abbreviation_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open abbreviation file " + path.string());
  }
  return parse_abbreviation_list(in);
}

std::vector<Sentence> segment(std::string_view text,
                              const SegmenterConfig& config) {
  std::vector<CharSpan> spans;
  std::size_t start = skip_space(text, 0);
  std::size_t i = start;

  auto close = [&](std::size_t end, std::size_t resume) {
    end = trim_back(text, start, end);
    if (end > start) spans.push_back({start, end});
    start = skip_space(text, resume);
    i = start;
  };

  while (i < text.size()) {
    if (const std::size_t after = paragraph_break_end(text, i); after != 0) {
      close(i, after);
      continue;
    }
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    const std::size_t run_begin = i;
    bool periods_only = true;
    while (i < text.size() && is_terminal(text[i])) {
      periods_only = periods_only && text[i] == '.';
      ++i;
    }
    while (i < text.size()) {
      const std::size_t n = closing_length(text, i);
      if (n == 0) break;
      i += n;
    }
    const std::size_t run_end = i;
    if (run_end < text.size() && !is_space(text[run_end])) continue;

    const std::size_t next = skip_space(text, run_end);
    if (next < text.size()) {
      if (std::islower(static_cast<unsigned char>(text[next]))) continue;
      if (periods_only &&
          config.abbreviations.contains(token_before(text, run_begin))) {
        continue;
      }
    }
    close(run_end, run_end);
  }
  if (start < text.size()) close(text.size(), text.size());

  // Short fragments join the previous sentence; a short leading fragment
  // absorbs the one after it.
  auto small = [&](CharSpan span) {
    return non_space_bytes(text, span) < config.min_sentence_chars;
  };
  std::vector<CharSpan> merged;
  merged.reserve(spans.size());
  for (const CharSpan& span : spans) {
    if (!merged.empty() && (small(span) || small(merged.back()))) {
      merged.back().end = span.end;
    } else {
      merged.push_back(span);
    }
  }

  std::vector<Sentence> sentences;
  sentences.reserve(merged.size());
  for (const CharSpan& span : merged) {
    sentences.push_back(make_sentence(text, span));
  }
  return sentences;
}

bool well_formed(const Sentence& sentence) {
  const std::string_view text = sentence.text;
  if (text.empty() || sentence.token_count < 3) return false;

  const unsigned char first = static_cast<unsigned char>(text.front());
  const bool good_start = std::isupper(first) || std::isdigit(first) ||
                          text.front() == '"' || text.front() == '\'' ||
                          std::any_of(kOpeningMultibyte.begin(),
                                      kOpeningMultibyte.end(),
                                      [&](std::string_view q) {
                                        return text.starts_with(q);
                                      });
  if (!good_start) return false;

  // Strip trailing closers, then require terminal punctuation.
  std::size_t end = text.size();
  for (bool stripped = true; stripped && end > 0;) {
    stripped = false;
    if (const char c = text[end - 1];
        c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') {
      --end;
      stripped = true;
      continue;
    }
    for (std::string_view q : kClosingMultibyte) {
      if (end >= q.size() && text.substr(end - q.size(), q.size()) == q) {
        end -= q.size();
        stripped = true;
        break;
      }
    }
  }
  return end > 0 && is_terminal(text[end - 1]);
}

}  // namespace mgtloc
