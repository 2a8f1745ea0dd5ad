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

#ifndef MGTLOC_TESTS_TOY_CORPUS_HPP_
#define MGTLOC_TESTS_TOY_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mgtloc/ngram_scorer.hpp"
#include "mgtloc/random.hpp"
#include "mgtloc/synthesis.hpp"
#include "mgtloc/types.hpp"

namespace mgtloc::testing {

// Synthetic two-source text. Human sentences draw words from a Zipf law
// over one ranking of a pseudo-word vocabulary; a generator with mixing
// weight delta draws each word from a second ranking with probability delta
// and from the human law otherwise.
struct ToyGenerator {
  std::string name;
  double delta = 0.5;
};

struct ToyCorpusConfig {
  int articles = 100;
  int min_sentences = 30;
  int max_sentences = 45;
  int min_words = 10;
  int max_words = 14;
  int vocabulary = 600;
  double zipf_exponent = 1.1;
  int sentences_per_paragraph = 5;
  int pool_sentences = 30;
  std::vector<ToyGenerator> generators = {{"gen-a", 0.5}, {"gen-b", 0.6}};
  std::uint64_t seed = 1;
};

class ToyLanguage {
 public:
  ToyLanguage(int vocabulary, double zipf_exponent, std::uint64_t seed);

  // One sentence; delta = 0 is human text.
  std::string sentence(Rng& rng, int min_words, int max_words, double delta) const;

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::size_t draw(Rng& rng, const std::vector<double>& cdf) const;

  std::vector<std::string> words_;
  std::vector<std::size_t> human_rank_;
  std::vector<std::size_t> machine_rank_;
  std::vector<double> cdf_;
};

struct ToyCorpus {
  std::vector<Article> human;
  std::vector<GenerationPool> pools;
};

// Human articles "h00000".. and one pool per generator with
// `pool_sentences` machine sentences for every article.
ToyCorpus make_toy_corpus(const ToyCorpusConfig& config);

// Human and machine sentences (one generator each, round robin) drawn from
// a separate substream, for training the n-gram scorer.
std::vector<LabeledText> make_toy_training_text(const ToyCorpusConfig& config,
                                                int sentences_per_class,
                                                std::uint64_t seed);

}  // namespace mgtloc::testing

#endif  // MGTLOC_TESTS_TOY_CORPUS_HPP_
