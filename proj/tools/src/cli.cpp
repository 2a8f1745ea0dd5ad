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

#include "cli.hpp"

#include <exception>
#include <iostream>
#include <limits>
#include <memory>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mgtloc/errors.hpp"

namespace mgtloc::cli {
namespace {

CLI::Range positive_int() { return CLI::Range(1, std::numeric_limits<int>::max()); }

void setup_logging(const std::string& level) {
  auto logger = std::make_shared<spdlog::logger>(
      "mgtloc", std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::from_str(level));
  spdlog::set_default_logger(std::move(logger));
}

CLI::App* add_synth(CLI::App& app, SynthArgs& a) {
  CLI::App* cmd = app.add_subcommand("synth", "Splice machine segments into human articles");
  cmd->add_option("--human", a.human, "Human article JSONL")->required();
  cmd->add_option("--pool", a.pools, "Generation pool JSONL (repeatable)")->required();
  cmd->add_option("--segments", a.segments, "Segments per article: 1, 2, 3 or uniform")
      ->check(CLI::IsMember({"1", "2", "3", "uniform"}));
  cmd->add_option("--min-tokens", a.min_tokens, "Minimum segment tokens")
      ->check(CLI::Range(40, 300));
  cmd->add_option("--max-tokens", a.max_tokens, "Maximum segment tokens")
      ->check(CLI::Range(40, 300));
  cmd->add_option("--min-gap", a.min_gap, "Human sentences kept between segments")
      ->check(positive_int());
  cmd->add_flag("--insert", a.insert, "Insert segments instead of replacing text");
  cmd->add_option("--out", a.out, "Output article JSONL")->required();
  cmd->add_option("--stats", a.stats, "Dataset statistics JSON");
  return cmd;
}

CLI::App* add_train_ngram(CLI::App& app, TrainNgramArgs& a) {
  CLI::App* cmd =
      app.add_subcommand("train-ngram", "Train the character n-gram scorer");
  cmd->add_option("--train", a.train, "Labelled article JSONL")->required();
  cmd->add_option("--order", a.order, "n-gram order")->check(CLI::Range(1, 8));
  cmd->add_option("--out", a.out, "Model JSON")->required();
  return cmd;
}

CLI::App* add_score(CLI::App& app, ScoreArgs& a) {
  CLI::App* cmd = app.add_subcommand("score", "Score or extract features for every window");
  cmd->add_option("--in", a.in, "Article JSONL")->required();
  cmd->add_option("--scorer", a.scorer, "Scorer spec")->required();
  cmd->add_option("--mode", a.mode, "score or feature")
      ->check(CLI::IsMember({"score", "feature"}));
  cmd->add_option("--m", a.m, "Window size in sentences")->check(positive_int());
  cmd->add_option("--step", a.step, "Window step (1..m)")->check(positive_int());
  cmd->add_option("--timeout", a.timeout, "Sidecar timeout per request (s)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", a.out, "Output JSONL")->required();
  return cmd;
}

CLI::App* add_localize(CLI::App& app, LocalizeArgs& a) {
  CLI::App* cmd = app.add_subcommand("localize", "Label every sentence");
  cmd->add_option("--in", a.in, "Article JSONL")->required();
  cmd->add_option("--strategy", a.strategy, "single, vote or adaloc")
      ->check(CLI::IsMember({"single", "vote", "adaloc"}));
  cmd->add_option("--agg", a.agg, "AdaLoc aggregation: vote, skip or middle")
      ->check(CLI::IsMember({"vote", "skip", "middle"}));
  cmd->add_option("--m", a.m, "Window size in sentences")->check(positive_int());
  cmd->add_option("--scorer", a.scorer, "Scorer spec")->required();
  cmd->add_option("--model", a.model, "AdaLoc model file, or 'oracle'");
  cmd->add_option("--threshold", a.threshold, "Decision threshold")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--vote-rule", a.vote_rule, "majority or mean")
      ->check(CLI::IsMember({"majority", "mean"}));
  cmd->add_option("--timeout", a.timeout, "Sidecar timeout per request (s)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", a.out, "Prediction JSONL")->required();
  cmd->add_option("--report", a.report, "Annotated report (.html or text)");
  return cmd;
}

CLI::App* add_train_adaloc(CLI::App& app, TrainAdalocArgs& a) {
  CLI::App* cmd = app.add_subcommand("train-adaloc", "Train the AdaLoc adaptor");
  cmd->add_option("--train", a.train, "Feature JSONL from 'score --mode feature'")
      ->required();
  cmd->add_option("--val", a.val, "Validation article JSONL");
  cmd->add_option("--scorer", a.scorer, "Feature scorer for validation articles");
  cmd->add_option("--m", a.m, "Expected window size")->check(positive_int());
  cmd->add_option("--epochs", a.epochs, "Maximum epochs")->check(positive_int());
  cmd->add_option("--batch-size", a.batch_size, "Batch size")->check(positive_int());
  cmd->add_option("--lr", a.lr, "Learning rate")->check(CLI::NonNegativeNumber);
  cmd->add_option("--patience", a.patience, "Early-stopping patience")
      ->check(positive_int());
  cmd->add_option("--dropout", a.dropout, "Dropout rate")->check(CLI::Range(0.0, 0.99));
  cmd->add_option("--hidden", a.hidden, "Hidden width")->check(positive_int());
  cmd->add_option("--activation", a.activation, "relu or tanh")
      ->check(CLI::IsMember({"relu", "tanh"}));
  cmd->add_option("--timeout", a.timeout, "Sidecar timeout per request (s)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", a.out, "Model file")->required();
  cmd->add_option("--log", a.log, "Training log JSON");
  return cmd;
}

CLI::App* add_eval(CLI::App& app, EvalArgs& a) {
  CLI::App* cmd = app.add_subcommand("eval", "AP, mAP, All, precision and recall");
  cmd->add_option("--truth", a.truth, "Labelled article JSONL")->required();
  cmd->add_option("--preds", a.preds, "Prediction JSONL (repeatable)")->required();
  cmd->add_option("--threshold", a.threshold, "Re-binarize scores at this threshold");
  cmd->add_option("--out", a.out, "Report JSON (stdout when omitted)");
  cmd->add_option("--csv", a.csv, "Table row CSV");
  cmd->add_option("--method", a.method, "Row label for --csv");
  return cmd;
}

CLI::App* add_report(CLI::App& app, ReportArgs& a) {
  CLI::App* cmd = app.add_subcommand("report", "Render predictions as text or HTML");
  cmd->add_option("--in", a.in, "Article JSONL")->required();
  cmd->add_option("--preds", a.preds, "Prediction JSONL")->required();
  cmd->add_option("--format", a.format, "text or html (default: from --out)")
      ->check(CLI::IsMember({"text", "html"}));
  cmd->add_option("--out", a.out, "Output file")->required();
  return cmd;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"mgtloc: sentence-level localization of machine-generated text"};
  app.name("mgtloc");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GlobalArgs global;
  app.add_option("--seed", global.seed, "Seed for all randomness");
  app.add_option("--threads", global.threads, "Article-level worker threads")
      ->check(CLI::Range(1, 256));
  app.add_option("--log-level", global.log_level, "trace, debug, info, warn, error, off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  SynthArgs synth;
  TrainNgramArgs train_ngram;
  ScoreArgs score;
  LocalizeArgs localize;
  TrainAdalocArgs train_adaloc;
  EvalArgs eval;
  ReportArgs report;
  CLI::App* synth_cmd = add_synth(app, synth);
  CLI::App* train_ngram_cmd = add_train_ngram(app, train_ngram);
  CLI::App* score_cmd = add_score(app, score);
  CLI::App* localize_cmd = add_localize(app, localize);
  CLI::App* train_adaloc_cmd = add_train_adaloc(app, train_adaloc);
  CLI::App* eval_cmd = add_eval(app, eval);
  CLI::App* report_cmd = add_report(app, report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  setup_logging(global.log_level);
  try {
    if (synth_cmd->parsed()) run_synth(global, synth);
    if (train_ngram_cmd->parsed()) run_train_ngram(global, train_ngram);
    if (score_cmd->parsed()) run_score(global, score);
    if (localize_cmd->parsed()) run_localize(global, localize);
    if (train_adaloc_cmd->parsed()) run_train_adaloc(global, train_adaloc);
    if (eval_cmd->parsed()) run_eval(global, eval);
    if (report_cmd->parsed()) run_report(global, report);
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const TransportError& e) {
    spdlog::error("scorer transport: {}", e.what());
    return kExitScorer;
  } catch (const ProtocolError& e) {
    spdlog::error("scorer protocol: {}", e.what());
    return kExitScorer;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const std::string& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data());
}

}  // namespace mgtloc::cli
