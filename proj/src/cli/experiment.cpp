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

#include "daf/cli/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "daf/cli/pipeline.hpp"
#include "daf/common/error.hpp"
#include "daf/data/attention_mass.hpp"
#include "daf/data/split.hpp"
#include "daf/features/lld.hpp"

namespace daf::cli {

model::ModelConfig experiment_model() {
  model::ModelConfig cfg;
  cfg.conv_channels = 4;
  cfg.gru_hidden = 16;
  cfg.fc_hidden = 32;
  return cfg;
}

data::SynthConfig experiment_synth() {
  data::SynthConfig cfg;
  cfg.clip_s = 2.5;
  return cfg;
}

bool ExperimentResult::accuracy_criterion() const {
  return mean_rho_attention >= mean_rho_mean_pool && 3 * seeds_with_positive_gap >= 2 * seeds.size();
}

bool ExperimentResult::attention_criterion() const {
  return fraction_ratio_above_1 >= 0.8 && max_abs_mean_pool_ratio_dev < 1e-9;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.seeds.empty()) throw ContractError("experiment: no seeds");
  const auto clips = data::synth_generate(cfg.synth);

  Corpus corpus;
  std::vector<std::vector<std::uint8_t>> masks;
  corpus.features.resize(clips.size());
  parallel_for(clips.size(), cfg.threads,
               [&](std::size_t i) { corpus.features[i] = features::extract_llds(clips[i].audio, cfg.synth.frames); });
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& c = clips[i];
    if (c.mask.size() != corpus.features[i].rows()) throw ContractError("experiment: mask and frame counts differ");
    corpus.instance_ids.push_back(c.instance_id);
    corpus.dyad_ids.push_back(c.dyad_id);
    corpus.labels.push_back(c.labels[0]);
    masks.push_back(c.mask);
    ++counts[c.dyad_id];
  }
  std::vector<data::DyadCount> dyads;
  for (const auto& [id, n] : counts) dyads.push_back({id, n});
  const auto folds = data::fold_rotation(data::build_split(dyads));

  ExperimentResult res;
  std::size_t pooled_clips = 0, pooled_above = 0;
  for (std::size_t k = 0; k < cfg.seeds.size(); ++k) {
    SeedOutcome so;
    so.seed = cfg.seeds[k];
    so.fold = k % data::kGroups;
    train::TrainConfig tc = cfg.train;
    tc.seed = so.seed;

    auto log_epoch = [&](const char* tag) {
      return [&, tag](const train::EpochRecord& e) {
        if (cfg.verbose) {
          std::fprintf(stderr, "seed %llu %s epoch %zu loss %.4f dev rho %.4f\n",
                       static_cast<unsigned long long>(so.seed), tag, e.epoch, e.train_loss, e.dev_rho);
        }
      };
    };
    model::ModelConfig mean_cfg = cfg.model;
    mean_cfg.attention = model::AttentionKind::kMeanPool;
    const auto mean_out = run_fold(corpus, folds[so.fold], mean_cfg, tc, false, log_epoch("ATT(NO)"));
    model::ModelConfig att_cfg = cfg.model;
    att_cfg.attention = model::AttentionKind::kAttRnn;
    const auto att_out = run_fold(corpus, folds[so.fold], att_cfg, tc, true, log_epoch("ATT(R)"));

    so.rho_mean_pool = mean_out.test_rho;
    so.rho_attention = att_out.test_rho;
    so.epochs_mean_pool = mean_out.report.epochs_run();
    so.epochs_attention = att_out.report.epochs_run();
    double ratio_sum = 0.0, uniform_sum = 0.0;
    for (std::size_t j = 0; j < att_out.test_indices.size(); ++j) {
      const auto& mask = masks[att_out.test_indices[j]];
      const auto mass = data::attention_mass(att_out.test_alpha[j], mask);
      if (!mass.ratio) continue;
      ++so.clips_with_ratio;
      if (*mass.ratio > 1.0) ++so.clips_ratio_above_1;
      ratio_sum += *mass.ratio;
      // Mean pooling weighs frames uniformly.
      const std::vector<double> uniform(mask.size(), 1.0 / static_cast<double>(mask.size()));
      const double r = *data::attention_mass(uniform, mask).ratio;
      uniform_sum += r;
      res.max_abs_mean_pool_ratio_dev = std::max(res.max_abs_mean_pool_ratio_dev, std::fabs(r - 1.0));
    }
    if (so.clips_with_ratio) {
      so.mean_ratio_attention = ratio_sum / static_cast<double>(so.clips_with_ratio);
      so.mean_ratio_mean_pool = uniform_sum / static_cast<double>(so.clips_with_ratio);
    }
    pooled_clips += so.clips_with_ratio;
    pooled_above += so.clips_ratio_above_1;
    if (so.rho_attention > so.rho_mean_pool) ++res.seeds_with_positive_gap;
    res.mean_rho_mean_pool += so.rho_mean_pool / static_cast<double>(cfg.seeds.size());
    res.mean_rho_attention += so.rho_attention / static_cast<double>(cfg.seeds.size());
    res.seeds.push_back(so);
  }
  res.fraction_ratio_above_1 = pooled_clips ? static_cast<double>(pooled_above) / static_cast<double>(pooled_clips) : 0.0;
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

nlohmann::json experiment_to_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["mean_rho_att_no"] = r.mean_rho_mean_pool;
  j["mean_rho_att_rnn"] = r.mean_rho_attention;
  j["seeds_with_positive_gap"] = r.seeds_with_positive_gap;
  j["fraction_ratio_above_1"] = r.fraction_ratio_above_1;
  j["max_abs_mean_pool_ratio_deviation"] = r.max_abs_mean_pool_ratio_dev;
  j["accuracy_criterion"] = r.accuracy_criterion();
  j["attention_criterion"] = r.attention_criterion();
  j["wall_time_s"] = r.wall_time_s;
  j["seeds"] = nlohmann::json::array();
  for (const auto& s : r.seeds) {
    j["seeds"].push_back({{"seed", s.seed},
                          {"fold", s.fold},
                          {"rho_att_no", s.rho_mean_pool},
                          {"rho_att_rnn", s.rho_attention},
                          {"clips_with_ratio", s.clips_with_ratio},
                          {"clips_ratio_above_1", s.clips_ratio_above_1},
                          {"mean_ratio_att_rnn", s.mean_ratio_attention},
                          {"mean_ratio_att_no", s.mean_ratio_mean_pool},
                          {"epochs_att_no", s.epochs_mean_pool},
                          {"epochs_att_rnn", s.epochs_attention}});
  }
  return j;
}

}  // namespace daf::cli
