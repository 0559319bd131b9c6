// tests/test_app.cpp

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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>

#include "listen/app/commands.hpp"
#include "listen/app/config.hpp"
#include "listen/errors.hpp"
#include "listen/features/store.hpp"

namespace {

using namespace listen;
using namespace listen::app;
namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("listen_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

const char* kSmallConfig =
    "task = clip_class\n"
    "arch = cnn5\n"
    "base_width = 4\n"
    "batch_size = 4\n"
    "steps = 3\n"
    "lr = 0.001\n"
    "seed = 7\n";

ExperimentConfig small_config(const std::string& task) {
  auto c = parse_config(kSmallConfig);
  apply_setting(c, "task", task);
  c.model.head = head_for(c.task);
  if (c.task == TaskKind::seld) c.model.in_channels = 4;
  return c;
}

Dataset synth_dataset(const fs::path& dir, TaskKind task, std::uint64_t seed = 3, std::size_t clips = 4) {
  SynthOptions o;
  o.task = task;
  o.clips = clips;
  o.classes = 3;
  o.seconds = 1.0;
  o.seed = seed;
  cmd_synth(o, dir);
  return {dir / "manifest.csv", std::nullopt, std::nullopt};
}

TEST(Config, ParsesKeysCommentsAndWhitespace) {
  const auto c = parse_config("# experiment\n\n  task = seld \narch=cnn13\npool = max\nin_channels = 4\n"
                              "steps=12\nlr = 2.5e-4\nlr_schedule = cosine\nlambda = 0.5\nseed = 9\n");
  EXPECT_EQ(c.task, TaskKind::seld);
  EXPECT_EQ(c.model.arch, models::Arch::cnn13);
  EXPECT_EQ(c.model.pool, models::PoolKind::max);
  EXPECT_EQ(c.model.head, models::Head::seld);
  EXPECT_EQ(c.model.in_channels, 4u);
  EXPECT_EQ(c.steps, 12u);
  EXPECT_DOUBLE_EQ(c.lr, 2.5e-4);
  EXPECT_EQ(c.lr_schedule, LrSchedule::cosine);
  EXPECT_DOUBLE_EQ(c.lambda, 0.5);
  EXPECT_EQ(c.seed, 9u);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("colour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("task clip_class\n"), ConfigError);
  EXPECT_THROW(parse_config("task = speech\n"), ConfigError);
  EXPECT_THROW(parse_config("arch = cnn7\n"), ConfigError);
  EXPECT_THROW(parse_config("steps = -3\n"), ConfigError);
  EXPECT_THROW(parse_config("steps = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("lr = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("lr = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("lr_schedule = linear\n"), ConfigError);
  EXPECT_THROW(parse_config("threshold = 1\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/listen.cfg"), ConfigError);
}

TEST(Config, ConstantScheduleKeepsRate) {
  auto c = parse_config("lr = 0.01\nsteps = 10\n");
  for (std::size_t s = 1; s <= 10; ++s) EXPECT_DOUBLE_EQ(learning_rate(c, s), 0.01);
}

TEST(Config, CosineScheduleDecaysFromFullRate) {
  auto c = parse_config("lr = 0.01\nsteps = 100\nlr_schedule = cosine\n");
  EXPECT_DOUBLE_EQ(learning_rate(c, 1), 0.01);
  EXPECT_NEAR(learning_rate(c, 51), 0.005, 1e-15);
  double prev = 1.0;
  for (std::size_t s = 1; s <= 100; ++s) {
    const double v = learning_rate(c, s);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, 0.0);
    prev = v;
  }
}

TEST(Config, FingerprintIgnoresLayoutButTracksValues) {
  const auto a = parse_config("task = clip_tag\nsteps = 5\n");
  const auto b = parse_config("# same\nsteps=5\n\ntask=clip_tag\n");
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  EXPECT_EQ(fingerprint(a).size(), 16u);
  EXPECT_EQ(fingerprint(a).find_first_not_of("0123456789abcdef"), std::string::npos);
  for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{
           {"steps", "6"}, {"seed", "1"}, {"lr", "0.002"}, {"lr_schedule", "cosine"}, {"arch", "cnn13"},
           {"pool", "max"}, {"base_width", "32"}, {"lambda", "2"}, {"threshold", "0.4"}}) {
    auto c = a;
    apply_setting(c, k, v);
    EXPECT_NE(fingerprint(a), fingerprint(c)) << k;
  }
}

TEST(Config, CanonicalTextRoundTrips) {
  const auto a = parse_config("task = frame_sed\narch = cnn9\nlr = 0.0003\nsegment_seconds = 2.5\n");
  const auto b = parse_config(canonical_text(a));
  EXPECT_EQ(canonical_text(a), canonical_text(b));
}

using Synth = Scratch;

TEST_F(Synth, SameSeedGivesIdenticalFiles) {
  synth_dataset(dir_ / "a", TaskKind::frame_sed, 11);
  synth_dataset(dir_ / "b", TaskKind::frame_sed, 11);
  synth_dataset(dir_ / "c", TaskKind::frame_sed, 12);
  for (const char* f : {"manifest.csv", "vocab.txt", "events.csv", "wav/clip0000.wav"}) {
    ASSERT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  EXPECT_NE(slurp(dir_ / "a" / "wav/clip0000.wav"), slurp(dir_ / "c" / "wav/clip0000.wav"));
}

TEST_F(Synth, DatasetLoadsWithExpectedShape) {
  const auto ds = synth_dataset(dir_, TaskKind::clip_class, 1, 6);
  const auto loaded = load_dataset(ds);
  EXPECT_EQ(loaded.clips.size(), 6u);
  EXPECT_EQ(loaded.vocab.names().size(), 3u);
  for (const auto& clip : loaded.clips) {
    std::size_t n = 0;
    for (auto v : clip.labels.weak) n += v;
    EXPECT_EQ(n, 1u) << clip.clip_id;
  }
}

using Extract = Scratch;

TEST_F(Extract, WritesFeaturesAndStandardizingStatistics) {
  const auto ds = synth_dataset(dir_ / "data", TaskKind::clip_tag);
  const auto cfg = small_config("clip_tag");
  cmd_extract(ds, dir_ / "feat", cfg);
  const auto stats = read_stats(dir_ / "feat" / kStatsFile);
  ASSERT_EQ(stats.mean.size(), 64u);
  std::vector<double> sum(64, 0.0), sum_sq(64, 0.0);
  std::size_t rows = 0;
  for (const auto& clip : load_dataset(ds).clips) {
    auto s = features::read_features(dir_ / "feat" / (clip.clip_id + ".lmel"));
    EXPECT_EQ(s.channels, 1u);
    EXPECT_EQ(s.mels, 64u);
    EXPECT_EQ(s.frames, 64u);
    standardize(s, stats);
    for (std::size_t i = 0; i < s.data.size(); ++i) {
      sum[i % 64] += s.data[i];
      sum_sq[i % 64] += static_cast<double>(s.data[i]) * s.data[i];
    }
    rows += s.frames;
  }
  for (std::size_t m = 0; m < 64; ++m) {
    EXPECT_NEAR(sum[m] / rows, 0.0, 1e-3) << m;
    EXPECT_NEAR(std::sqrt(sum_sq[m] / rows), 1.0, 1e-2) << m;
  }
}

TEST_F(Extract, MissingAudioIsADataError) {
  const auto ds = synth_dataset(dir_ / "data", TaskKind::clip_class);
  fs::remove(dir_ / "data" / "wav" / "clip0001.wav");
  EXPECT_THROW(cmd_extract(ds, dir_ / "feat", small_config("clip_class")), DataError);
}

using Pipeline = Scratch;

struct RunResult {
  TrainSummary summary;
  std::string checkpoint;
  std::string report;
};

RunResult run_pipeline(const fs::path& dir, const ExperimentConfig& cfg, TaskKind task) {
  const auto ds = synth_dataset(dir / "data", task);
  cmd_extract(ds, dir / "feat", cfg);
  RunResult r;
  r.summary = cmd_train(cfg, ds, dir / "feat", dir / "model.ckpt", dir / "train.log");
  r.checkpoint = slurp(dir / "model.ckpt");
  cmd_infer(cfg, dir / "model.ckpt", ds, dir / "feat", dir / "pred");
  r.report = cmd_evaluate(cfg, dir / "pred", ds, dir / "report.json");
  return r;
}

TEST_F(Pipeline, TrainingIsDeterministicForASeed) {
  const auto cfg = small_config("clip_class");
  const auto a = run_pipeline(dir_ / "a", cfg, TaskKind::clip_class);
  const auto b = run_pipeline(dir_ / "b", cfg, TaskKind::clip_class);
  ASSERT_EQ(a.summary.losses.size(), 3u);
  EXPECT_EQ(a.summary.losses, b.summary.losses);
  EXPECT_EQ(a.checkpoint, b.checkpoint);
  EXPECT_EQ(a.report, b.report);
  for (double l : a.summary.losses) EXPECT_TRUE(std::isfinite(l));
  EXPECT_EQ(slurp(dir_ / "a" / "train.log"), slurp(dir_ / "b" / "train.log"));

  auto other = cfg;
  other.seed = 8;
  const auto c = run_pipeline(dir_ / "c", other, TaskKind::clip_class);
  EXPECT_NE(a.checkpoint, c.checkpoint);
}

TEST_F(Pipeline, ClipClassReportAndScores) {
  const auto cfg = small_config("clip_class");
  const auto r = run_pipeline(dir_, cfg, TaskKind::clip_class);
  const auto doc = nlohmann::json::parse(r.report);
  EXPECT_EQ(doc["task"], "clip_class");
  EXPECT_EQ(doc["config_fingerprint"], fingerprint(cfg));
  EXPECT_EQ(doc["seed"], 7);
  EXPECT_EQ(doc["clips"], 4);
  const double acc = doc["metrics"]["accuracy"];
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
  EXPECT_EQ(slurp(dir_ / "report.json"), r.report);

  std::ifstream scores(dir_ / "pred" / "scores.csv");
  std::string line;
  std::getline(scores, line);
  EXPECT_EQ(line.rfind("clip_id,", 0), 0u);
  std::size_t rows = 0;
  while (std::getline(scores, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    double total = 0.0;
    while (std::getline(ss, cell, ',')) total += std::stod(cell);
    EXPECT_NEAR(total, 1.0, 1e-5);
    ++rows;
  }
  EXPECT_EQ(rows, 4u);
}

TEST_F(Pipeline, TaggingReportHasRankingMetrics) {
  const auto r = run_pipeline(dir_, small_config("clip_tag"), TaskKind::clip_tag);
  const auto m = nlohmann::json::parse(r.report)["metrics"];
  for (const char* k : {"lwlrap", "map", "micro_auprc", "macro_auprc", "micro_f1"}) EXPECT_TRUE(m.contains(k)) << k;
}

TEST_F(Pipeline, FrameTaskWritesFramesAndEvents) {
  const auto r = run_pipeline(dir_, small_config("frame_sed"), TaskKind::frame_sed);
  EXPECT_TRUE(fs::exists(dir_ / "pred" / "frame_scores.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "pred" / "events.csv"));
  const auto m = nlohmann::json::parse(r.report)["metrics"];
  for (const char* k : {"segment_f1", "segment_er", "event_f1", "tagging_map"}) EXPECT_TRUE(m.contains(k)) << k;
}

TEST_F(Pipeline, SeldReportHasLocalizationMetrics) {
  const auto r = run_pipeline(dir_, small_config("seld"), TaskKind::seld);
  const auto m = nlohmann::json::parse(r.report)["metrics"];
  for (const char* k : {"segment_f1", "segment_er", "doa_error", "frame_recall", "seld_score"})
    EXPECT_TRUE(m.contains(k)) << k;
}

TEST_F(Pipeline, TaskMismatchIsAConfigError) {
  const auto tags = synth_dataset(dir_ / "tags", TaskKind::clip_tag, 5, 8);
  auto cfg = small_config("clip_tag");
  cmd_extract(tags, dir_ / "feat", cfg);
  EXPECT_THROW(cmd_train(small_config("clip_class"), tags, dir_ / "feat", dir_ / "m.ckpt"), ConfigError);

  // seld audio with a sidecar that carries no directions
  const auto seld = synth_dataset(dir_ / "seld", TaskKind::seld);
  synth_dataset(dir_ / "sed", TaskKind::frame_sed);
  cmd_extract(seld, dir_ / "feat4", small_config("seld"));
  fs::copy_file(dir_ / "sed" / "events.csv", dir_ / "seld" / "events.csv", fs::copy_options::overwrite_existing);
  try {
    cmd_train(small_config("seld"), seld, dir_ / "feat4", dir_ / "m.ckpt");
    ADD_FAILURE() << "expected a ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("direction"), std::string::npos) << e.what();
  }
}

TEST_F(Pipeline, ChannelMismatchIsAConfigError) {
  const auto ds = synth_dataset(dir_ / "data", TaskKind::clip_class);
  cmd_extract(ds, dir_ / "feat", small_config("clip_class"));
  auto cfg = small_config("clip_class");
  cfg.model.in_channels = 2;
  EXPECT_THROW(cmd_train(cfg, ds, dir_ / "feat", dir_ / "m.ckpt"), ConfigError);
}

using Cli = Scratch;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LISTEN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(Cli, ExitCodesFollowErrorKinds) {
  const std::string d = dir_.string();
  EXPECT_EQ(run_cli("synth --task clip_class --clips 4 --seconds 1 --out " + d + "/data"), 0);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("extract --manifest " + d + "/data/manifest.csv --out " + d + "/feat --set colour=red"), 2);
  EXPECT_EQ(run_cli("extract --manifest " + d + "/data/manifest.csv --out " + d + "/feat --config " + d +
                    "/missing.cfg"),
            2);
  EXPECT_EQ(run_cli("extract --manifest " + d + "/nothing.csv --out " + d + "/feat"), 3);
  {
    std::ofstream bad(dir_ / "bad.ckpt", std::ios::binary);
    bad << "not a checkpoint";
  }
  EXPECT_EQ(run_cli("extract --manifest " + d + "/data/manifest.csv --out " + d + "/feat"), 0);
  EXPECT_EQ(run_cli("infer --manifest " + d + "/data/manifest.csv --features " + d + "/feat --checkpoint " + d +
                    "/bad.ckpt --out " + d + "/pred --set base_width=4"),
            3);
}

}  // namespace
