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

#ifndef MGTLOC_METRICS_HPP_
#define MGTLOC_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgtloc/localizer.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc {

struct ScoredLabel {
  double score = 0.0;
  int label = kHuman;
};

// Non-interpolated average precision: the mean, over positives in rank
// order, of the precision at each positive's rank. Items are ranked by score
// descending; tied scores are ordered by a shuffle seeded from a hash of the
// label sequence, followed by a stable sort, so results are reproducible and
// invariant under strictly monotone score transforms. Throws DataError when
// there are no positives or a score is NaN.
double average_precision(std::span<const ScoredLabel> pairs);

// Expected average precision over uniformly random orderings of tied scores
// (closed form). Equals average_precision() when there are no ties.
double expected_average_precision(std::span<const ScoredLabel> pairs);

// One sentence under evaluation.
struct SentenceOutcome {
  double score = 0.0;
  int truth = kHuman;
  int predicted = kHuman;
};

struct OutcomeGroup {
  std::string generator_name;
  std::vector<SentenceOutcome> outcomes;
};

struct EvalReport {
  std::map<std::string, double> per_generator_ap;
  double map_mean = 0.0;  // mean of per_generator_ap
  double all_ap = 0.0;    // AP of the pooled outcomes
  double precision = 0.0;
  double recall = 0.0;
  // Set when nothing was predicted positive; precision is then reported as 0.
  bool precision_undefined = false;
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  // Generators without any positive sentence (AP undefined, left out of mAP).
  std::vector<std::string> skipped_generators;

  std::string to_json() const;
  // Table row shaped like a results table: method, one column per generator,
  // mAP, All. Values are percentages with two decimals.
  std::string csv_header() const;
  std::string csv_row(std::string_view method) const;
};

EvalReport evaluate_outcomes(std::span<const OutcomeGroup> groups);

// Matches predictions to ground truth by article id and groups sentences by
// the truth article's generator ("unknown" without metadata). Predicted
// labels come from the predictions unless `threshold` is given, in which case
// they are recomputed as score >= threshold. Throws DataError listing every
// unmatched article id or sentence-count mismatch.
EvalReport evaluate(std::span<const Article> truth,
                    std::span<const LocalizationResult> predictions,
                    std::optional<double> threshold = std::nullopt);

}  // namespace mgtloc

#endif  // MGTLOC_METRICS_HPP_
