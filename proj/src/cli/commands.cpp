/* Copyright 2026 The DAF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "daf/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <set>

#include "CLI11.hpp"
#include "daf/cli/experiment.hpp"
#include "daf/cli/pipeline.hpp"
#include "daf/cli/run_manifest.hpp"
#include "daf/common/binary_io.hpp"
#include "daf/common/csv.hpp"
#include "daf/common/error.hpp"
#include "daf/data/attention_mass.hpp"
#include "daf/data/manifest.hpp"
#include "daf/data/split.hpp"
#include "daf/data/synth.hpp"
#include "daf/features/feature_io.hpp"
#include "daf/features/norm.hpp"
#include "daf/model/checkpoint.hpp"
#include "daf/model/crdnn.hpp"
#include "daf/stats/correlation.hpp"
#include "daf/stats/histogram.hpp"
#include "daf/stats/ratings.hpp"
#include "daf/stats/report.hpp"
#include "daf/stats/ztest.hpp"
#include "json.hpp"

namespace daf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool strict = false;
  fs::path out;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path require_out(const Globals& g) {
  if (g.out.empty()) throw InputError("--out is required for this command");
  fs::create_directories(g.out);
  return g.out;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

// ---------------------------------------------------------------- extract

struct ExtractOpts {
  fs::path in;
  double window_ms = 25.0;
  double hop_ms = 10.0;
};

void cmd_extract(const Globals& g, const ExtractOpts& o) {
  const fs::path out = require_out(g);
  if (!fs::is_directory(o.in)) throw InputError("no input: '" + o.in.string() + "' is not a directory");
  std::vector<fs::path> wavs;
  for (const auto& e : fs::directory_iterator(o.in)) {
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (e.is_regular_file() && ext == ".wav") wavs.push_back(e.path());
  }
  std::sort(wavs.begin(), wavs.end());
  if (wavs.empty()) throw InputError("no input: no .wav files in '" + o.in.string() + "'");

  const features::FrameSpec spec{o.window_ms, o.hop_ms};
  spec.validate();
  RunManifest run("extract", g.seed);
  run.set_config({{"in", o.in.string()}, {"window_ms", o.window_ms}, {"hop_ms", o.hop_ms}, {"strict", g.strict}});

  std::vector<std::optional<features::FeatureMatrix>> results(wavs.size());
  std::vector<std::string> failures(wavs.size());
  parallel_for(wavs.size(), g.threads, [&](std::size_t i) {
    try {
      results[i] = features::extract_llds(features::read_wav(wavs[i]), spec);
    } catch (const InputError& e) {
      failures[i] = e.what();
    }
  });
  std::vector<const features::FeatureMatrix*> ok;
  for (std::size_t i = 0; i < wavs.size(); ++i) {
    if (!results[i]) {
      if (g.strict) throw InputError(wavs[i].string() + ": " + failures[i]);
      warn("skipping " + wavs[i].string() + ": " + failures[i]);
      continue;
    }
    if (results[i]->rows() == 0) {
      if (g.strict) throw InputError(wavs[i].string() + ": shorter than one frame");
      warn("skipping " + wavs[i].string() + ": shorter than one frame");
      results[i].reset();
      continue;
    }
    run.add_input(wavs[i]);
    const fs::path dst = out / (wavs[i].stem().string() + ".daf");
    features::write_features(dst, *results[i]);
    run.add_output(dst);
    ok.push_back(&*results[i]);
  }
  if (ok.empty()) throw InputError("no input: every file failed to decode");
  std::size_t frames = 0;
  for (const auto* m : ok) frames += m->rows();
  if (frames >= 2) {
    const fs::path norm_path = out / "norm.json";
    write_text_file(norm_path, features::norm_to_json(features::fit_norm(std::span<const features::FeatureMatrix* const>(ok))));
    run.add_output(norm_path);
  }
  run.write(out / "run.json");
  std::cout << "extracted " << ok.size() << " of " << wavs.size() << " files\n";
}

// ---------------------------------------------------------------- synth

struct SynthOpts {
  data::SynthConfig cfg;
};

void cmd_synth(const Globals& g, SynthOpts o) {
  const fs::path out = require_out(g);
  o.cfg.seed = g.seed;
  o.cfg.validate();
  for (const char* d : {"wav", "masks", "features"}) fs::create_directories(out / d);
  RunManifest run("synth", g.seed);
  run.set_config({{"dyads", o.cfg.n_dyads},
                  {"clips_per_dyad", o.cfg.clips_per_dyad},
                  {"sample_rate", o.cfg.sample_rate},
                  {"child_talk_fraction", o.cfg.child_talk_fraction},
                  {"child_gain", o.cfg.child_gain},
                  {"noise_rms", o.cfg.noise_rms},
                  {"raters", o.cfg.raters}});

  const std::size_t n = o.cfg.n_dyads * o.cfg.clips_per_dyad;
  std::vector<data::SynthClip> clips(n);
  std::vector<features::FeatureMatrix> feats(n);
  parallel_for(n, g.threads, [&](std::size_t i) {
    clips[i] = data::synth_clip(o.cfg, i / o.cfg.clips_per_dyad, i % o.cfg.clips_per_dyad);
    feats[i] = features::extract_llds(clips[i].audio, o.cfg.frames);
  });

  data::Manifest manifest;
  manifest.has_label = {true, true, true, true};
  std::string annotations = csv_row({"instance_id", "dyad_id", "rater_id", "CA", "PA", "CV", "PV"});
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = clips[i];
    const fs::path wav = out / "wav" / (c.instance_id + ".wav");
    const fs::path mask = out / "masks" / (c.instance_id + ".mask");
    const fs::path feat = out / "features" / (c.instance_id + ".daf");
    features::write_wav(wav, c.audio);
    data::write_mask(mask, c.mask);
    features::write_features(feat, feats[i]);
    manifest.instances.push_back({c.instance_id, c.dyad_id, feat, c.labels});
    for (std::size_t r = 0; r < c.ratings.size(); ++r) {
      const auto& v = c.ratings[r];
      annotations += csv_row({c.instance_id, c.dyad_id, "r" + std::to_string(r), fmt(v[0]), fmt(v[1]), fmt(v[2]),
                              fmt(v[3])});
    }
  }
  write_manifest(out / "manifest.csv", manifest);
  write_text_file(out / "annotations.csv", annotations);
  for (const char* f : {"manifest.csv", "annotations.csv"}) run.add_output(out / f);
  for (const char* d : {"wav", "masks", "features"}) run.add_output(out / d);
  run.write(out / "run.json");
  std::cout << "generated " << n << " clips from " << o.cfg.n_dyads << " dyads\n";
}

// ---------------------------------------------------------------- split

void cmd_split(const Globals& g, const fs::path& manifest_path) {
  const fs::path out = require_out(g);
  const auto manifest = data::read_manifest(manifest_path);
  std::map<std::string, std::size_t> counts;
  for (const auto& inst : manifest.instances) ++counts[inst.dyad_id];
  std::vector<data::DyadCount> dyads;
  for (const auto& [id, c] : counts) dyads.push_back({id, c});
  const auto plan = data::build_split(dyads);
  RunManifest run("split", g.seed);
  run.add_input(manifest_path);
  data::write_split(out / "split.json", plan);
  run.add_output(out / "split.json");
  run.write(out / "run.json");
  for (std::size_t i = 0; i < data::kGroups; ++i) {
    std::size_t inst = 0;
    for (const auto& d : plan.groups[i]) inst += counts[d];
    std::cout << "group " << i << ": " << plan.groups[i].size() << " dyads, " << inst << " instances\n";
  }
}

// ---------------------------------------------------------------- train-eval

struct TrainEvalOpts {
  fs::path manifest;
  fs::path split;
  std::string task = "CA";
  std::string attention = "no";
  std::string dropout = "cr";
  std::string merge = "sum";
  std::vector<std::size_t> folds;
  model::ModelConfig model;
  train::TrainConfig train;
  bool verbose = false;
};

void cmd_train_eval(const Globals& g, TrainEvalOpts o) {
  const fs::path out = require_out(g);
  const auto task = stats::parse_attribute(o.task);
  o.model.attention = model::parse_attention(o.attention);
  o.model.dropout = model::parse_dropout(o.dropout);
  o.model.direction_merge = model::parse_merge(o.merge);
  o.model.validate();
  o.train.seed = g.seed;
  o.train.validate();
  if (o.folds.empty()) o.folds = {0, 1, 2, 3, 4};
  for (std::size_t f : o.folds) {
    if (f >= data::kGroups) throw InputError("fold index " + std::to_string(f) + " out of range 0..4");
  }

  const auto manifest = data::read_manifest(o.manifest);
  const auto plan = data::read_split(o.split);
  std::set<std::string> planned;
  for (const auto& grp : plan.groups) planned.insert(grp.begin(), grp.end());
  for (const auto& inst : manifest.instances) {
    if (!planned.count(inst.dyad_id)) throw InputError("split does not cover dyad '" + inst.dyad_id + "'");
  }
  const Corpus corpus = load_corpus(manifest, task, g.threads);
  const auto folds = data::fold_rotation(plan);

  RunManifest run("train-eval", g.seed);
  run.add_input(o.manifest);
  run.add_input(o.split);
  run.set_config({{"task", o.task},
                  {"model", json::parse(model::config_to_json(o.model))},
                  {"learning_rate", o.train.learning_rate},
                  {"batch_size", o.train.batch_size},
                  {"patience", o.train.patience},
                  {"max_epochs", o.train.max_epochs},
                  {"folds", o.folds}});

  const std::string tag = o.task + "_" + std::string(model::cli_name(o.model.attention)) + "_" +
                          std::string(model::cli_name(o.model.dropout));
  std::vector<FoldOutcome> outcomes(o.folds.size());
  std::mutex log_mutex;
  parallel_for(o.folds.size(), g.threads, [&](std::size_t k) {
    const std::size_t f = o.folds[k];
    outcomes[k] = run_fold(corpus, folds[f], o.model, o.train, false, [&](const train::EpochRecord& e) {
      if (!o.verbose) return;
      std::lock_guard lock(log_mutex);
      std::cerr << "fold " << f << " epoch " << e.epoch << " loss " << e.train_loss << " dev rho " << e.dev_rho << "\n";
    });
  });

  stats::EvalReport report;
  report.model = model::model_label(o.model.attention, o.model.dropout);
  report.task = o.task;
  std::vector<double> pooled_pred, pooled_label;
  std::string predictions = csv_row({"instance_id", "fold", "label", "prediction"});
  for (std::size_t k = 0; k < o.folds.size(); ++k) {
    const std::size_t f = o.folds[k];
    const auto& oc = outcomes[k];
    const fs::path ckpt = out / (tag + "_fold" + std::to_string(f) + ".dafm");
    const fs::path log = out / (tag + "_fold" + std::to_string(f) + "_train.json");
    model::write_checkpoint(ckpt, oc.checkpoint);
    write_text_file(log, train::train_report_to_json(oc.report));
    run.add_output(ckpt);
    run.add_output(log);
    report.fold_rho.push_back(oc.test_rho);
    for (std::size_t j = 0; j < oc.test_indices.size(); ++j) {
      const std::size_t i = oc.test_indices[j];
      pooled_pred.push_back(oc.test_predictions[j]);
      pooled_label.push_back(corpus.labels[i]);
      predictions += csv_row({corpus.instance_ids[i], std::to_string(f), fmt(corpus.labels[i]), fmt(oc.test_predictions[j])});
    }
  }
  stats::summarize(report);
  report.pooled_n = pooled_pred.size();
  report.pooled_rho = train::rho_or_zero(pooled_pred, pooled_label);
  const fs::path report_path = out / (tag + "_report.json");
  const fs::path pred_path = out / (tag + "_predictions.csv");
  write_text_file(report_path, stats::report_to_json(report) + "\n");
  write_text_file(pred_path, predictions);
  run.add_output(report_path);
  run.add_output(pred_path);
  run.write(out / (tag + "_run.json"));
  char line[256];
  std::snprintf(line, sizeof line, "%s %s: rho %.4f +- %.4f over %zu folds (pooled %.4f, N=%zu)", report.model.c_str(),
                o.task.c_str(), report.mean_rho, report.sd_rho, report.fold_rho.size(), report.pooled_rho,
                report.pooled_n);
  std::cout << line << "\n";
}

// ---------------------------------------------------------------- attn-dump

struct AttnOpts {
  fs::path checkpoint;
  fs::path manifest;
  fs::path masks;
  std::vector<std::string> instances;
};

void cmd_attn_dump(const Globals& g, const AttnOpts& o) {
  const fs::path out = require_out(g);
  const auto ckpt = model::read_checkpoint(o.checkpoint);
  if (ckpt.config.attention == model::AttentionKind::kMeanPool) throw InputError("no attention weights");
  const auto manifest = data::read_manifest(o.manifest);
  const std::set<std::string> wanted(o.instances.begin(), o.instances.end());
  RunManifest run("attn-dump", g.seed);
  run.add_input(o.checkpoint);
  run.add_input(o.manifest);

  std::string csv = csv_row({"instance_id", "frame_index", "alpha", "amplitude", "speaker_mask"});
  std::string mass_csv = csv_row({"instance_id", "mass", "mask_fraction", "ratio"});
  Rng unused(0);
  std::size_t dumped = 0;
  for (const auto& inst : manifest.instances) {
    if (!wanted.empty() && !wanted.count(inst.instance_id)) continue;
    const auto raw = features::read_features(inst.feature_path);
    const auto x = ckpt.norm ? features::apply_norm(raw, *ckpt.norm) : raw;
    const auto pred = model::forward<float>(ckpt.config, ckpt.params, x, ad::Mode::kInfer, unused);
    const auto& alpha = *pred.alpha;
    std::vector<std::uint8_t> mask;
    if (!o.masks.empty()) {
      const fs::path mp = o.masks / (inst.instance_id + ".mask");
      if (fs::exists(mp)) mask = data::read_mask(mp);
      if (!mask.empty() && mask.size() != alpha.size()) {
        throw InputError(mp.string() + ": mask has " + std::to_string(mask.size()) + " frames, features have " +
                         std::to_string(alpha.size()));
      }
    }
    const auto& names = raw.names();
    const auto le = std::find(names.begin(), names.end(), "log_energy");
    for (std::size_t t = 0; t < alpha.size(); ++t) {
      const std::string amp = le == names.end() ? "" : fmt(std::exp(0.5 * raw.at(t, le - names.begin())));
      csv += csv_row({inst.instance_id, std::to_string(t), fmt(alpha[t]), amp,
                      mask.empty() ? "" : std::to_string(mask[t])});
    }
    if (!mask.empty()) {
      const std::vector<double> a(alpha.begin(), alpha.end());
      const auto m = data::attention_mass(a, mask);
      mass_csv += csv_row({inst.instance_id, fmt(m.mass), fmt(m.mask_fraction), m.ratio ? fmt(*m.ratio) : ""});
    }
    ++dumped;
  }
  if (dumped == 0) throw InputError("no matching instances in the manifest");
  write_text_file(out / "attention.csv", csv);
  run.add_output(out / "attention.csv");
  if (!o.masks.empty()) {
    write_text_file(out / "attention_mass.csv", mass_csv);
    run.add_output(out / "attention_mass.csv");
  }
  run.write(out / "run.json");
  std::cout << "dumped attention for " << dumped << " instances\n";
}

// ---------------------------------------------------------------- stats

json matrix_json(const stats::Matrix4& m) {
  json j = json::array();
  for (const auto& row : m) j.push_back(row);
  return j;
}

void cmd_stats(const Globals& g, const fs::path& annotations, std::size_t bins) {
  const fs::path out = require_out(g);
  const auto set = stats::read_annotations(annotations);
  RunManifest run("stats", g.seed);
  run.add_input(annotations);
  json j;
  j["instances"] = set.instance_ids.size();
  j["raters"] = set.rater_ids;
  std::array<std::vector<double>, 4> labels;
  for (std::size_t a = 0; a < 4; ++a) {
    const auto name = std::string(stats::attribute_name(stats::kAttributes[a]));
    const auto i31 = stats::icc(set.tables[a], stats::IccForm::kIcc31);
    const auto i3k = stats::icc(set.tables[a], stats::IccForm::kIcc3k);
    j["icc"][name] = {{"icc31", i31.estimate},
                      {"icc31_ci", {i31.ci_low, i31.ci_high}},
                      {"icc3k", i3k.estimate},
                      {"icc3k_ci", {i3k.ci_low, i3k.ci_high}},
                      {"bms", i31.bms},
                      {"ems", i31.ems}};
    labels[a] = stats::standardize_labels(set.tables[a]);
    const fs::path hist = out / ("hist_" + name + ".csv");
    write_text_file(hist, stats::histogram_csv(stats::histogram(labels[a], bins)));
    run.add_output(hist);
  }
  j["order"] = {"CA", "PA", "CV", "PV"};
  j["pearson"] = matrix_json(stats::pearson_matrix(labels));
  j["spearman"] = matrix_json(stats::spearman_matrix(labels));
  write_text_file(out / "stats.json", j.dump(2) + "\n");
  run.add_output(out / "stats.json");
  run.write(out / "run.json");
  std::cout << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- ztest

struct ZOpts {
  std::optional<double> rho1, rho2;
  std::size_t n = 0;
  std::vector<fs::path> reports;
};

void cmd_ztest(const Globals& g, const ZOpts& o) {
  json j;
  if (!o.reports.empty()) {
    if (o.reports.size() < 2) throw InputError("--reports needs at least two files");
    std::vector<stats::EvalReport> reports;
    for (const auto& p : o.reports) reports.push_back(stats::report_from_json(read_text_file(p)));
    j["comparisons"] = json::array();
    for (const auto& c : stats::compare_reports(reports)) {
      j["comparisons"].push_back({{"model_a", c.model_a},
                                  {"model_b", c.model_b},
                                  {"rho_a", c.rho_a},
                                  {"rho_b", c.rho_b},
                                  {"n", reports.front().pooled_n},
                                  {"z", c.test.z},
                                  {"p", c.test.p},
                                  {"significant_0.05", c.test.significant_05()},
                                  {"significant_0.001", c.test.significant_001()},
                                  {"dependent_samples", c.test.dependent_samples}});
    }
  } else {
    if (!o.rho1 || !o.rho2 || o.n == 0) throw InputError("ztest needs --rho1, --rho2 and --n, or --reports");
    const auto r = stats::z_test_corr_diff(*o.rho1, *o.rho2, o.n);
    j = {{"rho1", *o.rho1},
         {"rho2", *o.rho2},
         {"n", o.n},
         {"z", r.z},
         {"p", r.p},
         {"significant_0.05", r.significant_05()},
         {"significant_0.001", r.significant_001()},
         {"dependent_samples", r.dependent_samples}};
  }
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    write_text_file(g.out / "ztest.json", j.dump(2) + "\n");
    RunManifest run("ztest", g.seed);
    for (const auto& p : o.reports) run.add_input(p);
    run.add_output(g.out / "ztest.json");
    run.write(g.out / "run.json");
  }
  std::cout << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- experiment

void cmd_experiment(const Globals& g, ExperimentConfig cfg) {
  cfg.synth.seed = g.seed;
  cfg.threads = g.threads;
  const auto res = run_experiment(cfg);
  const json j = experiment_to_json(res);
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    write_text_file(g.out / "experiment.json", j.dump(2) + "\n");
    RunManifest run("experiment", g.seed);
    run.set_config({{"model", json::parse(model::config_to_json(cfg.model))}, {"seeds", cfg.seeds}});
    run.add_output(g.out / "experiment.json");
    run.write(g.out / "run.json");
  }
  std::cout << j.dump(2) << "\n";
}

void add_model_options(CLI::App* sub, model::ModelConfig& m) {
  sub->add_option("--conv-channels", m.conv_channels, "Convolution filters")->capture_default_str();
  sub->add_option("--gru-hidden", m.gru_hidden, "GRU cells per direction")->capture_default_str();
  sub->add_option("--gru-layers", m.gru_layers, "Bidirectional GRU layers")->capture_default_str();
  sub->add_option("--fc-hidden", m.fc_hidden, "Hidden units of the FC head")->capture_default_str();
  sub->add_option("--dropout-p", m.dropout_p, "Dropout probability")->capture_default_str();
}

void add_train_options(CLI::App* sub, train::TrainConfig& t) {
  sub->add_option("--lr", t.learning_rate, "Adam learning rate")->capture_default_str();
  sub->add_option("--batch", t.batch_size, "Minibatch size")->capture_default_str();
  sub->add_option("--patience", t.patience, "Early-stopping patience in epochs")->capture_default_str();
  sub->add_option("--max-epochs", t.max_epochs, "Epoch cap")->capture_default_str();
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Speech affect recognition for two-speaker recordings"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--strict", g.strict, "Abort on the first unreadable input");
  app.add_option("--out", g.out, "Output directory");

  ExtractOpts ex;
  auto* extract = app.add_subcommand("extract", "WAV directory -> DAF1 feature files and norm stats");
  extract->add_option("--in", ex.in, "Directory of .wav files")->required();
  extract->add_option("--window-ms", ex.window_ms)->capture_default_str();
  extract->add_option("--hop-ms", ex.hop_ms)->capture_default_str();

  SynthOpts sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dyad corpus");
  synth->add_option("--dyads", sy.cfg.n_dyads)->capture_default_str();
  synth->add_option("--clips", sy.cfg.clips_per_dyad, "Clips per dyad")->capture_default_str();
  synth->add_option("--child-talk", sy.cfg.child_talk_fraction, "Child share of bursts")->capture_default_str();
  synth->add_option("--child-gain", sy.cfg.child_gain)->capture_default_str();
  synth->add_option("--noise", sy.cfg.noise_rms, "Background noise RMS")->capture_default_str();
  synth->add_option("--sample-rate", sy.cfg.sample_rate)->capture_default_str();

  fs::path split_manifest;
  auto* split = app.add_subcommand("split", "Build the 5-group speaker-independent split");
  split->add_option("--manifest", split_manifest)->required();

  TrainEvalOpts te;
  auto* train_eval = app.add_subcommand("train-eval", "Cross-validated training and test evaluation");
  train_eval->add_option("--manifest", te.manifest)->required();
  train_eval->add_option("--split", te.split)->required();
  train_eval->add_option("--task", te.task, "CA, PA, CV or PV")->capture_default_str();
  train_eval->add_option("--attention", te.attention, "no, rnn or cnn")->capture_default_str();
  train_eval->add_option("--dropout", te.dropout, "all or cr")->capture_default_str();
  train_eval->add_option("--merge", te.merge, "sum or concat")->capture_default_str();
  train_eval->add_option("--folds", te.folds, "Subset of folds 0..4")->delimiter(',');
  train_eval->add_flag("--verbose", te.verbose, "Log every epoch");
  add_model_options(train_eval, te.model);
  add_train_options(train_eval, te.train);

  AttnOpts at;
  auto* attn = app.add_subcommand("attn-dump", "Per-frame attention weights of a checkpoint");
  attn->add_option("--checkpoint", at.checkpoint)->required();
  attn->add_option("--manifest", at.manifest)->required();
  attn->add_option("--masks", at.masks, "Directory of <instance_id>.mask files");
  attn->add_option("--instances", at.instances, "Instance ids to dump")->delimiter(',');

  fs::path annotations;
  std::size_t bins = 20;
  auto* st = app.add_subcommand("stats", "Rating reliability, correlations and histograms");
  st->add_option("--annotations", annotations)->required();
  st->add_option("--bins", bins)->capture_default_str()->check(CLI::PositiveNumber);

  ZOpts zo;
  auto* zt = app.add_subcommand("ztest", "Fisher z-test between two correlations");
  zt->add_option("--rho1", zo.rho1);
  zt->add_option("--rho2", zo.rho2);
  zt->add_option("--n", zo.n);
  zt->add_option("--reports", zo.reports, "EvalReport JSON files");

  ExperimentConfig xc;
  auto* exp = app.add_subcommand("experiment", "Synthetic diarization experiment (ATT(NO) vs ATT(R))");
  exp->add_option("--seeds", xc.seeds)->delimiter(',');
  exp->add_flag("--verbose", xc.verbose);
  add_model_options(exp, xc.model);
  add_train_options(exp, xc.train);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*extract) cmd_extract(g, ex);
    else if (*synth) cmd_synth(g, sy);
    else if (*split) cmd_split(g, split_manifest);
    else if (*train_eval) cmd_train_eval(g, te);
    else if (*attn) cmd_attn_dump(g, at);
    else if (*st) cmd_stats(g, annotations, bins);
    else if (*zt) cmd_ztest(g, zo);
    else if (*exp) cmd_experiment(g, xc);
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace daf::cli
