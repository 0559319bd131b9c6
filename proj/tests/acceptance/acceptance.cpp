// tests/acceptance/acceptance.cpp

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

// Acceptance checks for the listen toolkit. Prints one PASS/FAIL line per
// criterion and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "listen/app/commands.hpp"
#include "listen/app/config.hpp"
#include "listen/features/logmel.hpp"
#include "listen/features/stft.hpp"
#include "listen/metrics/detection.hpp"
#include "listen/metrics/localization.hpp"
#include "listen/metrics/tagging.hpp"
#include "listen/models/model.hpp"
#include "listen/nn/losses.hpp"
#include "listen/nn/ops.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

namespace {

using namespace listen;
using D = nn::Tensor<double>;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1

Outcome parameter_counts() {
  Outcome o;
  struct Row {
    models::Arch arch;
    std::size_t expected;
  };
  for (const Row& r : {Row{models::Arch::cnn5, 4304320}, Row{models::Arch::cnn9, 4686144},
                       Row{models::Arch::cnn13, 75477312}}) {
    models::ModelSpec s;
    s.arch = r.arch;
    s.pool = models::PoolKind::avg;
    s.base_width = 64;
    s.in_channels = 1;
    const std::size_t got = models::count_trunk_parameters(s);
    o.require(got == r.expected, models::to_string(r.arch) + " " + std::to_string(got) + " != " +
                                     std::to_string(r.expected));
  }
  if (o.pass) o.detail = "cnn5 4304320, cnn9 4686144, cnn13 75477312";
  return o;
}

// ---------------------------------------------------------------- 2

Outcome seld_scores() {
  struct Row {
    const char* name;
    double er, f1, doa, fr, printed;
  };
  const Row rows[] = {{"cnn5-avg", 0.33, 0.807, 54.4, 0.770, 0.263},
                      {"cnn9-avg", 0.32, 0.805, 44.0, 0.771, 0.248},
                      {"cnn9-max", 0.34, 0.794, 45.6, 0.763, 0.260},
                      {"cnn13-avg", 0.42, 0.728, 42.8, 0.714, 0.303}};
  Outcome o;
  std::string values;
  for (const Row& r : rows) {
    const double s = metrics::seld_score(r.er, r.f1, r.doa, r.fr);
    o.require(std::abs(s - r.printed) <= 0.001, std::string(r.name) + fmt(" %.6f", s));
    values += std::string(values.empty() ? "" : ", ") + r.name + fmt(" %.4f", s);
  }
  if (o.pass) o.detail = values + " (tolerance 0.001)";
  return o;
}

// ---------------------------------------------------------------- 3

constexpr int kSeeds = 20;
constexpr double kGradTolerance = 1e-4;

using Op = std::function<D(const std::vector<D>&)>;

double projected_check(const Op& op, const std::vector<nn::Shape>& shapes, double h = 1e-6) {
  double worst = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 1000);
    std::vector<D> inputs;
    for (const auto& s : shapes) inputs.push_back(oracle::random_tensor(s, rng));
    const auto w = oracle::random_weights(op(inputs).size(), rng);
    const auto r = oracle::check_gradients([&](const std::vector<D>& in) { return oracle::weighted_sum(op(in), w); },
                                           inputs, 0, static_cast<std::uint64_t>(seed), h);
    worst = std::max(worst, r.max_rel_error);
  }
  return worst;
}

D hot_rows(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<double> y(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) y[i * k + rng() % k] = 1.0;
  return D({n, k}, y);
}

double loss_checks() {
  double worst = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    const D ce_target = hot_rows(5, 6, rng);
    worst = std::max(worst, oracle::check_gradients([&](const std::vector<D>& in) { return nn::loss_ce(in[0], ce_target); },
                                                    {oracle::random_tensor({5, 6}, rng, true, 2.0)})
                                .max_rel_error);
    std::vector<double> y(12), m(12);
    for (std::size_t i = 0; i < 12; ++i) {
      y[i] = static_cast<double>(rng() % 2);
      m[i] = i == 0 ? 1.0 : static_cast<double>(rng() % 2);
    }
    const D target({3, 4}, y), mask({3, 4}, m);
    worst = std::max(worst, oracle::check_gradients(
                                [&](const std::vector<D>& in) {
                                  return nn::add(nn::loss_bce(in[0], target),
                                                 nn::loss_bce(in[0], target, std::optional<D>(mask)));
                                },
                                {oracle::random_tensor({3, 4}, rng, true, 2.0)})
                                .max_rel_error);
    std::vector<double> act(24);
    for (double& a : act) a = static_cast<double>(rng() % 2);
    act[0] = 1.0;
    nn::SeldTargets<double> t{D({2, 4, 3}, act), oracle::random_tensor({2, 4, 3}, rng, false),
                              oracle::random_tensor({2, 4, 3}, rng, false)};
    worst = std::max(worst, oracle::check_gradients(
                                [&](const std::vector<D>& in) { return nn::loss_seld(in[0], in[1], in[2], t, 0.7); },
                                {oracle::random_tensor({2, 4, 3}, rng), oracle::random_tensor({2, 4, 3}, rng),
                                 oracle::random_tensor({2, 4, 3}, rng)})
                                .max_rel_error);
  }
  return worst;
}

D head_loss(models::Model<double>& m, const D& x, models::Head head, std::size_t k, std::mt19937_64& rng) {
  using models::Head;
  const std::size_t n = x.dim(0), t = x.dim(2);
  if (head == Head::clip_softmax || head == Head::clip_sigmoid) {
    const D y = hot_rows(n, k, rng);
    const D logits = m.forward_clip(x, nn::Mode::train);
    return head == Head::clip_softmax ? nn::loss_ce(logits, y) : nn::loss_bce(logits, y);
  }
  std::vector<double> act(n * t * k);
  for (double& a : act) a = static_cast<double>(rng() % 2);
  const D activity({n, t, k}, act);
  const auto out = m.forward_frames(x, nn::Mode::train);
  if (head == Head::frame_sigmoid) return nn::loss_bce(out.sed, activity);
  nn::SeldTargets<double> targets{activity, oracle::random_tensor({n, t, k}, rng, false, 0.5),
                                  oracle::random_tensor({n, t, k}, rng, false, 0.5)};
  return nn::loss_seld(out.sed, *out.azimuth, *out.elevation, targets, 1.0);
}

double architecture_check(models::Arch arch, models::PoolKind pool, std::size_t frames) {
  using models::Head;
  const Head heads[] = {Head::clip_softmax, Head::clip_sigmoid, Head::frame_sigmoid, Head::seld};
  double worst = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    models::ModelSpec s;
    s.arch = arch;
    s.pool = pool;
    s.head = heads[seed % 4];
    s.in_channels = s.head == Head::seld ? 4 : 1;
    s.n_classes = 3;
    s.base_width = 2;
    auto m = models::Model<double>::build(s, static_cast<std::uint64_t>(seed));
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 500);
    std::vector<D> inputs = {oracle::random_tensor({2, s.in_channels, frames, 16}, rng)};
    for (auto* p : m.parameters()) inputs.push_back(p->tensor);
    const std::uint64_t label_seed = rng();
    const auto r = oracle::check_gradients(
        [&](const std::vector<D>& in) {
          std::mt19937_64 labels(label_seed);
          return head_loss(m, in[0], s.head, 3, labels);
        },
        inputs, 4, static_cast<std::uint64_t>(seed));
    worst = std::max(worst, r.max_rel_error);
  }
  return worst;
}

Outcome gradient_suite() {
  using namespace nn;
  struct Case {
    std::string name;
    std::function<double()> run;
  };
  BatchNormStats<double> eval_stats(2);
  eval_stats.running_mean = {0.3, -0.2};
  eval_stats.running_var = {1.7, 0.4};
  const std::vector<Case> cases = {
      {"conv2d", [] { return projected_check([](const auto& in) { return conv2d(in[0], in[1]); },
                                             {{2, 3, 5, 5}, {4, 3, 3, 3}}, 1e-3); }},
      {"batchnorm-train", [] {
         return projected_check(
             [](const auto& in) {
               BatchNormStats<double> stats(3);
               return batchnorm2d(in[0], in[1], in[2], stats, Mode::train);
             },
             {{3, 3, 4, 4}, {3}, {3}});
       }},
      {"batchnorm-eval", [&] {
         return projected_check([&](const auto& in) { return batchnorm2d_eval(in[0], in[1], in[2], eval_stats); },
                                {{2, 2, 3, 3}, {2}, {2}});
       }},
      {"pool-avg", [] { return projected_check([](const auto& in) { return pool2x2(in[0], PoolKind::avg); }, {{2, 2, 5, 4}}); }},
      {"pool-max", [] { return projected_check([](const auto& in) { return pool2x2(in[0], PoolKind::max); }, {{2, 2, 5, 4}}); }},
      {"relu", [] { return projected_check([](const auto& in) { return relu(in[0]); }, {{3, 7}}); }},
      {"global-pool-clip", [] { return projected_check([](const auto& in) { return global_pool_clip(in[0]); }, {{2, 3, 6, 5}}); }},
      {"global-pool-frames", [] { return projected_check([](const auto& in) { return global_pool_frames(in[0]); }, {{2, 3, 4, 5}}); }},
      {"linear", [] { return projected_check([](const auto& in) { return linear(in[0], in[1], in[2]); },
                                             {{2, 3, 4}, {5, 4}, {5}}, 1e-3); }},
      {"upsample-time", [] { return projected_check([](const auto& in) { return upsample_time(in[0], 4); }, {{2, 3, 2}}); }},
      {"crop-time", [] { return projected_check([](const auto& in) { return crop_time(in[0], 3); }, {{2, 5, 2}}); }},
      {"pad-time", [] { return projected_check([](const auto& in) { return pad_time_edge(in[0], 7); }, {{1, 2, 5, 3}}); }},
      {"max-over-time", [] { return projected_check([](const auto& in) { return max_over_time(in[0]); }, {{2, 6, 3}}); }},
      {"add", [] { return projected_check([](const auto& in) { return add(in[0], in[1]); }, {{3, 4}, {3, 4}}); }},
      {"scale", [] { return projected_check([](const auto& in) { return scale(in[0], -2.5); }, {{3, 4}}); }},
      {"losses", [] { return loss_checks(); }},
      {"cnn5-avg", [] { return architecture_check(models::Arch::cnn5, PoolKind::avg, 32); }},
      {"cnn9-avg", [] { return architecture_check(models::Arch::cnn9, PoolKind::avg, 32); }},
      {"cnn9-max", [] { return architecture_check(models::Arch::cnn9, PoolKind::max, 32); }},
      {"cnn13-avg", [] { return architecture_check(models::Arch::cnn13, PoolKind::avg, 64); }},
  };
  Outcome o;
  double worst = 0.0;
  std::string worst_name;
  for (const Case& c : cases) {
    const double e = c.run();
    o.require(e < kGradTolerance, c.name + fmt(" %.3g", e));
    if (e >= worst) {
      worst = e;
      worst_name = c.name;
    }
  }
  if (o.pass)
    o.detail = std::to_string(cases.size()) + " cases x " + std::to_string(kSeeds) + " seeds, worst " + worst_name +
               fmt(" %.3g", worst) + " (tolerance 1e-4)";
  return o;
}

// ---------------------------------------------------------------- 4

Outcome front_end() {
  Outcome o;
  io::Waveform w(1, 320000, 32000);
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = static_cast<float>(0.5 * std::sin(2.0 * std::numbers::pi * 1000.0 * static_cast<double>(i) / 32000.0));
  const auto mel = features::logmel(w);
  o.require(mel.channels == 1 && mel.frames == 640 && mel.mels == 64,
            "shape " + std::to_string(mel.frames) + " x " + std::to_string(mel.mels));
  const auto spec = features::stft_magnitude(w);
  std::size_t off_peak = 0;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < spec.bins; ++b)
      if (spec.at(0, t, b) > spec.at(0, t, best)) best = b;
    off_peak += best != 32;
  }
  o.require(spec.frames == 640 && off_peak == 0, std::to_string(off_peak) + " frames peak away from bin 32");
  if (o.pass) o.detail = "640 x 64 log-mel, STFT peak at bin 32 in all 640 frames";
  return o;
}

// ---------------------------------------------------------------- 5

metrics::ClipScores random_scores(std::mt19937_64& rng, bool ties) {
  const std::size_t n = 1 + rng() % 20, k = 1 + rng() % 8;
  metrics::ClipScores c(n, k);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& s : c.scores) s = ties ? static_cast<double>(rng() % 5) / 4.0 : u(rng);
  for (auto& t : c.targets) t = static_cast<std::uint8_t>(rng() % 3 == 0);
  c.targets[0] = 1;
  return c;
}

metrics::ActivityMatrix activity(std::size_t frames, std::size_t classes,
                                 std::initializer_list<std::tuple<std::size_t, std::size_t, std::size_t>> runs) {
  metrics::ActivityMatrix m(frames, classes, 0);
  for (const auto& [k, from, to] : runs)
    for (std::size_t f = from; f < to; ++f) m.at(f, k) = 1;
  return m;
}

Outcome metric_oracles() {
  Outcome o;
  std::mt19937_64 rng(2019);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_scores(rng, trial % 2 == 0);
    bool any = false;
    mismatches += metrics::lwlrap(c) != oracle::lwlrap(c.scores, c.targets, c.n, c.k);
    mismatches += metrics::average_precision(c).mean != oracle::mean_ap(c.scores, c.targets, c.n, c.k);
    mismatches += metrics::auprc(c, metrics::Averaging::micro) != oracle::step_auprc(c.scores, c.targets, any);
    mismatches += metrics::auprc(c, metrics::Averaging::macro) != oracle::macro_auprc(c.scores, c.targets, c.n, c.k);
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " ranking mismatches");

  const auto sub = metrics::sed_segment_metrics(activity(64, 2, {{0, 0, 64}}), activity(64, 2, {{1, 0, 64}}));
  o.require(sub.substitutions == 1 && sub.error_rate() == 1.0 && sub.f1() == 0.0, "wrong-class segment");
  const auto del = metrics::sed_segment_metrics(activity(192, 2, {{0, 0, 100}, {1, 150, 192}}),
                                                metrics::ActivityMatrix(192, 2, 0));
  o.require(del.error_rate() == 1.0 && del.deletions == del.reference_active, "empty estimate");
  const auto same = activity(256, 3, {{0, 10, 100}, {2, 120, 250}});
  const auto id = metrics::sed_segment_metrics(same, same);
  o.require(id.error_rate() == 0.0 && id.f1() == 1.0, "identical activity");
  o.require(metrics::sed_event_counts({{"a", 0, 1.0, 2.0}}, {{"a", 0, 1.15, 2.1}}).tp == 1, "event within collar");
  o.require(metrics::sed_event_counts({{"a", 0, 1.0, 2.0}}, {{"a", 0, 1.3, 2.0}}).tp == 0, "event beyond collar");
  if (o.pass) o.detail = "400 ranking comparisons exact; segment and event examples match";
  return o;
}

// ---------------------------------------------------------------- 6, 7

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

app::Dataset make_data(const fs::path& dir, app::TaskKind task, double seconds, std::size_t in_channels) {
  app::SynthOptions so;
  so.task = task;
  so.clips = 8;
  so.seconds = seconds;
  so.seed = 0;
  app::cmd_synth(so, dir);
  const app::Dataset ds{dir / "manifest.csv", std::nullopt, std::nullopt};
  auto cfg = app::parse_config("in_channels = " + std::to_string(in_channels) + "\n");
  app::cmd_extract(ds, dir / "feat", cfg);
  return ds;
}

const app::TaskKind kTasks[] = {app::TaskKind::clip_class, app::TaskKind::clip_tag, app::TaskKind::frame_sed,
                                app::TaskKind::seld};

Outcome learnability(const fs::path& root) {
  struct Arch {
    const char* arch;
    const char* pool;
    int width;
  };
  const Arch archs[] = {{"cnn5", "avg", 8}, {"cnn9", "avg", 8}, {"cnn9", "max", 8}, {"cnn13", "avg", 4}};
  Outcome o;
  std::string slowest;
  std::size_t most_steps = 0;
  for (const auto task : kTasks) {
    const std::size_t in = task == app::TaskKind::seld ? 4 : 1;
    const fs::path dir = root / app::to_string(task);
    const auto ds = make_data(dir, task, 2.0, in);
    for (const Arch& a : archs) {
      std::ostringstream text;
      text << "task = " << app::to_string(task) << "\narch = " << a.arch << "\npool = " << a.pool
           << "\nbase_width = " << a.width << "\nin_channels = " << in
           << "\nbatch_size = 8\nsteps = 500\nlr = 0.003\nlr_schedule = cosine\ntarget_loss = 0.01\nseed = 0\n";
      const auto cfg = app::parse_config(text.str());
      const auto summary = app::cmd_train(cfg, ds, dir / "feat", dir / "model.ckpt");
      const std::string name = app::to_string(task) + "/" + a.arch + "-" + a.pool;
      const double last = summary.losses.back();
      const bool ok = last < 0.01 && (task != app::TaskKind::clip_class || summary.train_accuracy == 1.0);
      std::string extra;
      if (summary.train_accuracy)
        extra = fmt("  accuracy %.3f", *summary.train_accuracy) + fmt(" (eval mode %.3f)", *summary.eval_accuracy);
      std::printf("    %-22s steps %3zu  loss %.5f%s\n", name.c_str(), summary.losses.size(), last, extra.c_str());
      std::fflush(stdout);
      o.require(ok, name + fmt(" loss %.4f", last));
      if (summary.losses.size() >= most_steps) {
        most_steps = summary.losses.size();
        slowest = name;
      }
    }
  }
  if (o.pass)
    o.detail = "16 pairs below 0.01, clip_class accuracy 1.0; most steps " + std::to_string(most_steps) + " (" +
               slowest + ")";
  return o;
}

std::string end_to_end(const fs::path& dir, app::TaskKind task) {
  const std::size_t in = task == app::TaskKind::seld ? 4 : 1;
  const auto ds = make_data(dir, task, 2.0, in);
  auto cfg = app::parse_config("task = " + app::to_string(task) + "\narch = cnn5\nbase_width = 8\nin_channels = " +
                               std::to_string(in) + "\nbatch_size = 4\nsteps = 20\nlr = 0.003\nseed = 5\n");
  app::cmd_train(cfg, ds, dir / "feat", dir / "model.ckpt");
  app::cmd_infer(cfg, dir / "model.ckpt", ds, dir / "feat", dir / "pred");
  app::cmd_evaluate(cfg, dir / "pred", ds, dir / "report.json");
  return slurp(dir / "report.json");
}

Outcome determinism(const fs::path& root) {
  Outcome o;
  for (const auto task : kTasks) {
    const std::string name = app::to_string(task);
    const auto a = end_to_end(root / (name + "_a"), task);
    const auto b = end_to_end(root / (name + "_b"), task);
    o.require(!a.empty() && a == b, name + " reports differ");
  }
  if (o.pass) o.detail = "reports byte-identical for all four tasks";
  return o;
}

}  // namespace

int main() {
  testing_support::TempDir scratch;
  int failures = 0;
  auto run = [&](int id, const char* title, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %d. %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  run(1, "parameter-count oracle", parameter_counts);
  run(2, "SELD-score consistency", seld_scores);
  run(3, "gradient suite", gradient_suite);
  run(4, "front-end contract", front_end);
  run(5, "metric oracles", metric_oracles);
  run(6, "overfit learnability", [&] { return learnability(scratch.path() / "learn"); });
  run(7, "determinism", [&] { return determinism(scratch.path() / "e2e"); });
  std::printf("N/A   8. development-set numbers: need the full DCASE 2019 data and multi-hour training; not run\n");
  return failures == 0 ? 0 : 1;
}
