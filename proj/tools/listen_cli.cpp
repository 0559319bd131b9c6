// tools/listen_cli.cpp

// Copyright 2026  The listen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "listen/app/commands.hpp"
#include "listen/errors.hpp"
#include "listen/nn/parallel.hpp"

namespace {

using namespace listen;

struct Common {
  std::string config;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

struct DatasetArgs {
  std::string manifest, vocab, events;
  app::Dataset get() const {
    app::Dataset d{manifest, {}, {}};
    if (!vocab.empty()) d.vocab = vocab;
    if (!events.empty()) d.events = events;
    return d;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key=value experiment config");
  cmd->add_option("--set", c.settings, "override one config key (key=value)");
  cmd->add_option("--seed", c.seed, "random seed (overrides the config)");
  cmd->add_option("--threads", c.threads, "worker threads (0 = default)");
}

void add_dataset(CLI::App* cmd, DatasetArgs& d) {
  cmd->add_option("--manifest", d.manifest, "clip manifest CSV")->required();
  cmd->add_option("--vocab", d.vocab, "class vocabulary (default: vocab.txt beside the manifest)");
  cmd->add_option("--events", d.events, "strong-label sidecar (default: events.csv beside the manifest)");
}

app::ExperimentConfig resolve(const Common& c) {
  app::ExperimentConfig cfg = c.config.empty() ? app::parse_config("") : app::load_config(c.config);
  for (const std::string& s : c.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    app::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  cfg.model.head = app::head_for(cfg.task);
  cfg.validate();
  if (c.threads > 0) nn::set_num_threads(c.threads);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"listen: log-mel CNN baselines for audio classification, tagging and detection"};
  cli.require_subcommand(1);
  Common common;

  DatasetArgs extract_data;
  std::string extract_out;
  auto* extract = cli.add_subcommand("extract", "compute log-mel features and training statistics");
  add_common(extract, common);
  add_dataset(extract, extract_data);
  extract->add_option("--out", extract_out, "feature directory")->required();

  DatasetArgs train_data;
  std::string train_features, train_out, train_log;
  auto* train = cli.add_subcommand("train", "train a model and write a checkpoint");
  add_common(train, common);
  add_dataset(train, train_data);
  train->add_option("--features", train_features, "feature directory")->required();
  train->add_option("--out", train_out, "checkpoint path")->required();
  train->add_option("--log", train_log, "per-step loss log (CSV)");

  DatasetArgs infer_data;
  std::string infer_ckpt, infer_features, infer_out;
  auto* infer = cli.add_subcommand("infer", "write clip or frame predictions");
  add_common(infer, common);
  add_dataset(infer, infer_data);
  infer->add_option("--checkpoint", infer_ckpt, "checkpoint path")->required();
  infer->add_option("--features", infer_features, "feature directory")->required();
  infer->add_option("--out", infer_out, "prediction directory")->required();

  DatasetArgs eval_data;
  std::string eval_predictions, eval_out, eval_taxonomy;
  auto* evaluate = cli.add_subcommand("evaluate", "score predictions and write a JSON report");
  add_common(evaluate, common);
  add_dataset(evaluate, eval_data);
  evaluate->add_option("--predictions", eval_predictions, "prediction directory")->required();
  evaluate->add_option("--out", eval_out, "report path")->required();
  evaluate->add_option("--taxonomy", eval_taxonomy, "fine-to-coarse map, one coarse index per line");

  app::SynthOptions synth_opts;
  std::string synth_task = "clip_class", synth_out;
  auto* synth = cli.add_subcommand("synth", "generate a synthetic dataset");
  add_common(synth, common);
  synth->add_option("--task", synth_task, "clip_class, clip_tag, frame_sed or seld");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--clips", synth_opts.clips, "number of clips");
  synth->add_option("--classes", synth_opts.classes, "number of classes");
  synth->add_option("--seconds", synth_opts.seconds, "clip length in seconds");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const app::ExperimentConfig cfg = resolve(common);
    if (*extract) {
      app::cmd_extract(extract_data.get(), extract_out, cfg);
    } else if (*train) {
      std::optional<std::filesystem::path> log;
      if (!train_log.empty()) log = train_log;
      const auto summary = app::cmd_train(cfg, train_data.get(), train_features, train_out, log);
      std::cout << "steps " << summary.losses.size() << " final loss " << summary.losses.back() << '\n';
      if (summary.train_accuracy) std::cout << "training accuracy " << *summary.train_accuracy << '\n';
      if (summary.eval_accuracy) std::cout << "eval-mode accuracy " << *summary.eval_accuracy << '\n';
      if (summary.train_angle_mae) std::cout << "training angle MAE " << *summary.train_angle_mae << '\n';
    } else if (*infer) {
      app::cmd_infer(cfg, infer_ckpt, infer_data.get(), infer_features, infer_out);
    } else if (*evaluate) {
      std::optional<std::filesystem::path> tax;
      if (!eval_taxonomy.empty()) tax = eval_taxonomy;
      std::cout << app::cmd_evaluate(cfg, eval_predictions, eval_data.get(), eval_out, tax);
    } else if (*synth) {
      synth_opts.task = app::parse_task(synth_task);
      synth_opts.seed = cfg.seed;
      app::cmd_synth(synth_opts, synth_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
