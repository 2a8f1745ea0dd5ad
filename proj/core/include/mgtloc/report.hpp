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

#ifndef MGTLOC_REPORT_HPP_
#define MGTLOC_REPORT_HPP_

#include <span>
#include <string>

#include "mgtloc/localizer.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc {

// Plain-text annotation: one line per sentence with the predicted label,
// score and (when the article is labelled) the ground truth.
//   [MGT 0.913 | truth MGT] The sentence text.
std::string render_text(const Article& article, const LocalizationResult& result);

// Self-contained HTML page; predicted machine sentences are highlighted
// with an intensity that follows the score.
std::string render_html(std::span<const Article> articles,
                        std::span<const LocalizationResult> results);

}  // namespace mgtloc

#endif  // MGTLOC_REPORT_HPP_
