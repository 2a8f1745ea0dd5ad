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

#include "mgtloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>

#include "json_util.hpp"
#include "mgtloc/errors.hpp"
#include "mgtloc/random.hpp"

namespace mgtloc {
namespace {

std::size_t count_positives(std::span<const ScoredLabel> pairs) {
  std::size_t positives = 0;
  for (const ScoredLabel& p : pairs) {
    if (std::isnan(p.score)) throw DataError("average precision: NaN score");
    if (p.label == kMachine) ++positives;
  }
  if (positives == 0) {
    throw DataError("average precision is undefined without positive labels");
  }
  return positives;
}

std::uint64_t label_hash(std::span<const ScoredLabel> pairs) {
  std::uint64_t h = fnv1a("mgtloc-ap");
  for (const ScoredLabel& p : pairs) {
    const char c = p.label == kMachine ? '1' : '0';
    h = fnv1a(std::string_view(&c, 1), h);
  }
  return h;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

}  // namespace

double average_precision(std::span<const ScoredLabel> pairs) {
  const std::size_t positives = count_positives(pairs);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(label_hash(pairs));
  rng.shuffle(std::span<std::size_t>(order));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].score > pairs[b].score;
  });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (pairs[order[rank]].label == kMachine) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return sum / static_cast<double>(positives);
}

double expected_average_precision(std::span<const ScoredLabel> pairs) {
  const std::size_t positives = count_positives(pairs);
  std::vector<ScoredLabel> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredLabel& a, const ScoredLabel& b) {
              return a.score > b.score;
            });
  double sum = 0.0;
  double before = 0.0;           // items ranked above the current tie group
  double positives_before = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double group_pos = 0.0;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      if (sorted[j].label == kMachine) group_pos += 1.0;
      ++j;
    }
    const double g = static_cast<double>(j - i);
    if (group_pos > 0.0) {
      // A uniformly random position r in the group holds a positive with
      // probability group_pos / g; given that, the expected number of other
      // group positives above it is (r - 1)(group_pos - 1)/(g - 1).
      for (double r = 1.0; r <= g; r += 1.0) {
        const double above =
            g > 1.0 ? (r - 1.0) * (group_pos - 1.0) / (g - 1.0) : 0.0;
        sum += (group_pos / g) * (positives_before + 1.0 + above) / (before + r);
      }
    }
    before += g;
    positives_before += group_pos;
    i = j;
  }
  return sum / static_cast<double>(positives);
}

EvalReport evaluate_outcomes(std::span<const OutcomeGroup> groups) {
  EvalReport report;
  std::vector<ScoredLabel> all;
  for (const OutcomeGroup& group : groups) {
    std::vector<ScoredLabel> pairs;
    pairs.reserve(group.outcomes.size());
    bool has_positive = false;
    for (const SentenceOutcome& o : group.outcomes) {
      pairs.push_back({o.score, o.truth});
      has_positive = has_positive || o.truth == kMachine;
      if (o.truth == kMachine) {
        ++report.positives;
        (o.predicted == kMachine ? report.true_positives
                                 : report.false_negatives)++;
      } else {
        ++report.negatives;
        if (o.predicted == kMachine) ++report.false_positives;
      }
    }
    all.insert(all.end(), pairs.begin(), pairs.end());
    if (!has_positive) {
      report.skipped_generators.push_back(group.generator_name);
      continue;
    }
    report.per_generator_ap[group.generator_name] = average_precision(pairs);
  }
  if (report.per_generator_ap.empty()) {
    throw DataError("evaluation needs at least one machine-generated sentence");
  }
  double sum = 0.0;
  for (const auto& [_, ap] : report.per_generator_ap) sum += ap;
  report.map_mean = sum / static_cast<double>(report.per_generator_ap.size());
  report.all_ap = average_precision(all);

  const auto predicted_pos = report.true_positives + report.false_positives;
  report.precision_undefined = predicted_pos == 0;
  report.precision = predicted_pos == 0
                         ? 0.0
                         : static_cast<double>(report.true_positives) /
                               static_cast<double>(predicted_pos);
  report.recall = static_cast<double>(report.true_positives) /
                  static_cast<double>(report.positives);
  return report;
}

EvalReport evaluate(std::span<const Article> truth,
                    std::span<const LocalizationResult> predictions,
                    std::optional<double> threshold) {
  std::unordered_map<std::string_view, const Article*> by_id;
  for (const Article& a : truth) {
    if (!a.labels) {
      throw DataError("ground-truth article '" + a.id + "' has no labels");
    }
    by_id.emplace(a.id, &a);
  }

  std::vector<std::string> problems;
  std::set<std::string_view> seen;
  std::map<std::string, OutcomeGroup> groups;
  for (const LocalizationResult& r : predictions) {
    const auto it = by_id.find(r.article_id);
    if (it == by_id.end()) {
      problems.push_back("prediction for unknown article '" + r.article_id + "'");
      continue;
    }
    if (!seen.insert(it->first).second) {
      problems.push_back("duplicate prediction for article '" + r.article_id + "'");
      continue;
    }
    const Article& a = *it->second;
    if (r.predictions.size() != a.sentences.size()) {
      problems.push_back("article '" + r.article_id + "': " +
                         std::to_string(r.predictions.size()) +
                         " predictions for " +
                         std::to_string(a.sentences.size()) + " sentences");
      continue;
    }
    const std::string generator = a.meta ? a.meta->generator_name : "unknown";
    OutcomeGroup& group = groups[generator];
    group.generator_name = generator;
    for (std::size_t i = 0; i < r.predictions.size(); ++i) {
      const SentencePrediction& p = r.predictions[i];
      if (p.sentence_idx != static_cast<int>(i)) {
        problems.push_back("article '" + r.article_id +
                           "': prediction index " +
                           std::to_string(p.sentence_idx) + " out of order");
        break;
      }
      const int predicted =
          threshold ? (p.score >= *threshold ? kMachine : kHuman) : p.label;
      group.outcomes.push_back({p.score, (*a.labels)[i], predicted});
    }
  }
  for (const Article& a : truth) {
    if (!seen.contains(a.id)) {
      problems.push_back("no prediction for article '" + a.id + "'");
    }
  }
  if (!problems.empty()) {
    std::string message = "prediction/ground-truth mismatch:";
    const std::size_t shown = std::min<std::size_t>(problems.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) message += "\n  " + problems[i];
    if (shown < problems.size()) {
      message += "\n  ... and " + std::to_string(problems.size() - shown) + " more";
    }
    throw DataError(message);
  }

  std::vector<OutcomeGroup> ordered;
  ordered.reserve(groups.size());
  for (auto& [_, g] : groups) ordered.push_back(std::move(g));
  return evaluate_outcomes(ordered);
}

std::string EvalReport::to_json() const {
  detail::Json j;
  j["per_generator_ap"] = per_generator_ap;
  j["map"] = map_mean;
  j["all_ap"] = all_ap;
  j["precision"] = precision;
  j["recall"] = recall;
  j["precision_undefined"] = precision_undefined;
  j["counts"] = {{"positives", positives},
                 {"negatives", negatives},
                 {"true_positives", true_positives},
                 {"false_positives", false_positives},
                 {"false_negatives", false_negatives}};
  j["skipped_generators"] = skipped_generators;
  return j.dump(2);
}

std::string EvalReport::csv_header() const {
  std::string out = "method";
  for (const auto& [name, _] : per_generator_ap) out += "," + name;
  return out + ",mAP,All";
}

std::string EvalReport::csv_row(std::string_view method) const {
  std::string out(method);
  for (const auto& [_, ap] : per_generator_ap) out += "," + percent(ap);
  return out + "," + percent(map_mean) + "," + percent(all_ap);
}

}  // namespace mgtloc
