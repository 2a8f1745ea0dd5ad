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

#include "mgtloc/report.hpp"

#include <cstdio>

#include "mgtloc/errors.hpp"

namespace mgtloc {
namespace {

void check_match(const Article& article, const LocalizationResult& result) {
  if (article.id != result.article_id ||
      article.sentences.size() != result.predictions.size()) {
    throw DataError("predictions for '" + result.article_id +
                    "' do not match article '" + article.id + "'");
  }
}

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string format(const char* fmt, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

const char* tag(int label) { return label == kMachine ? "MGT" : "HWT"; }

}  // namespace

std::string render_text(const Article& article, const LocalizationResult& result) {
  check_match(article, result);
  std::string out = "# " + article.id;
  if (!article.title.empty()) out += " | " + article.title;
  out += "\n# strategy " + std::string(strategy_name(result.strategy)) + ", m=" +
         std::to_string(result.m) + "\n";
  for (std::size_t i = 0; i < article.sentences.size(); ++i) {
    const SentencePrediction& p = result.predictions[i];
    out += "[";
    out += tag(p.label);
    out += " " + format("%.3f", p.score);
    if (article.labels) {
      out += " | truth ";
      out += tag((*article.labels)[i]);
    }
    out += "] " + article.sentences[i].text + "\n";
  }
  return out;
}

std::string render_html(std::span<const Article> articles,
                        std::span<const LocalizationResult> results) {
  if (articles.size() != results.size()) {
    throw DataError("report needs one prediction record per article");
  }
  std::string out =
      "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
      "<title>mgtloc report</title><style>"
      "body{font-family:serif;max-width:48em;margin:2em auto;line-height:1.5}"
      "span.s{padding:1px 0}span.truth{border-bottom:2px solid #c33}"
      "</style></head><body>\n";
  for (std::size_t a = 0; a < articles.size(); ++a) {
    const Article& article = articles[a];
    const LocalizationResult& result = results[a];
    check_match(article, result);
    out += "<article><h2>" + escape_html(article.title.empty() ? article.id
                                                              : article.title) +
           "</h2>\n<p class=\"meta\">" + escape_html(article.id) + " | " +
           std::string(strategy_name(result.strategy)) +
           " | m=" + std::to_string(result.m) + "</p>\n<p>";
    for (std::size_t i = 0; i < article.sentences.size(); ++i) {
      const SentencePrediction& p = result.predictions[i];
      std::string cls = "s";
      if (article.labels && (*article.labels)[i] == kMachine) cls += " truth";
      out += "<span class=\"" + cls + "\" title=\"score " + format("%.3f", p.score) +
             "\"";
      if (p.label == kMachine) {
        out += " style=\"background:rgba(255,200,0," +
               format("%.2f", 0.25 + 0.75 * p.score) + ")\"";
      }
      out += ">" + escape_html(article.sentences[i].text) + "</span> ";
    }
    out += "</p></article>\n";
  }
  out += "</body></html>\n";
  return out;
}

}  // namespace mgtloc
