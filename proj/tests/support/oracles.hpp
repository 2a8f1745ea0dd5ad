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

#ifndef MGTLOC_TESTS_ORACLES_HPP_
#define MGTLOC_TESTS_ORACLES_HPP_

#include <span>
#include <vector>

#include "mgtloc/metrics.hpp"

namespace mgtloc::testing {

// AP by sweeping a threshold over the distinct scores: each positive
// contributes #positives / #items among those scoring at least its score.
// Exact only for tie-free input.
double sweep_average_precision(std::span<const ScoredLabel> pairs);

// Mean AP over every ordering of tied items (n <= 9).
double enumerated_expected_average_precision(std::span<const ScoredLabel> pairs);

// Sentence labels from window scores of the step-1 plan, computed per
// sentence from the windows that cover it: strict majority of
// score >= threshold, ties broken by mean score >= threshold.
std::vector<int> brute_force_vote(std::span<const double> window_scores, int n, int m,
                                  double threshold = 0.5);

}  // namespace mgtloc::testing

#endif  // MGTLOC_TESTS_ORACLES_HPP_
