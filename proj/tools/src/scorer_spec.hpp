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

#ifndef MGTLOC_TOOLS_SCORER_SPEC_HPP_
#define MGTLOC_TOOLS_SCORER_SPEC_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "mgtloc/scorers.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc::cli {

// --scorer values:
//   oracle            ground truth from the input articles' labels
//   ngram:<file>      trained n-gram model (train-ngram)
//   extern[:<cmd>]    sidecar command or tcp://host:port; the command
//                     defaults to $MGT_SIDECAR_CMD
//   constant:<p>      fixed probability
//   random            seeded pseudo-random probabilities
struct ScorerSpec {
  enum class Kind { kOracle, kNgram, kExternal, kConstant, kRandom };
  Kind kind = Kind::kOracle;
  std::string argument;
  double constant = 0.5;
};

// Syntax check only; throws UsageError.
ScorerSpec parse_scorer_spec(const std::string& text);

std::unique_ptr<ChunkScorer> make_scorer(const ScorerSpec& spec,
                                         std::span<const Article> articles,
                                         std::uint64_t seed,
                                         double timeout_seconds);

}  // namespace mgtloc::cli

#endif  // MGTLOC_TOOLS_SCORER_SPEC_HPP_
