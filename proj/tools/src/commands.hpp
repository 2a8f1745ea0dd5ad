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

#ifndef MGTLOC_TOOLS_COMMANDS_HPP_
#define MGTLOC_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgtloc::cli {

struct GlobalArgs {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string log_level = "info";
};

struct SynthArgs {
  std::string human;
  std::vector<std::string> pools;
  std::string segments = "uniform";
  int min_tokens = 40;
  int max_tokens = 300;
  int min_gap = 2;
  bool insert = false;
  std::string out;
  std::string stats;
};

struct TrainNgramArgs {
  std::string train;
  int order = 4;
  std::string out;
};

struct ScoreArgs {
  std::string in;
  std::string scorer;
  std::string mode = "score";
  int m = 1;
  int step = 1;
  double timeout = 120.0;
  std::string out;
};

struct LocalizeArgs {
  std::string in;
  std::string strategy = "vote";
  std::string agg = "vote";
  int m = 3;
  std::string scorer;
  std::string model;
  double threshold = 0.5;
  std::string vote_rule = "majority";
  double timeout = 120.0;
  std::string out;
  std::string report;
};

struct TrainAdalocArgs {
  std::string train;
  std::string val;
  std::string scorer;
  std::optional<int> m;
  int epochs = 3;
  int batch_size = 16;
  double lr = 1e-5;
  int patience = 1;
  double dropout = 0.1;
  int hidden = 1024;
  std::string activation = "relu";
  double timeout = 120.0;
  std::string out;
  std::string log;
};

struct EvalArgs {
  std::string truth;
  std::vector<std::string> preds;
  std::optional<double> threshold;
  std::string out;
  std::string csv;
  std::string method;
};

struct ReportArgs {
  std::string in;
  std::string preds;
  std::string format;
  std::string out;
};

void run_synth(const GlobalArgs& g, const SynthArgs& a);
void run_train_ngram(const GlobalArgs& g, const TrainNgramArgs& a);
void run_score(const GlobalArgs& g, const ScoreArgs& a);
void run_localize(const GlobalArgs& g, const LocalizeArgs& a);
void run_train_adaloc(const GlobalArgs& g, const TrainAdalocArgs& a);
void run_eval(const GlobalArgs& g, const EvalArgs& a);
void run_report(const GlobalArgs& g, const ReportArgs& a);

}  // namespace mgtloc::cli

#endif  // MGTLOC_TOOLS_COMMANDS_HPP_
