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

#pragma once

// Synthetic diarization experiment: does an RNN attention head learn to
// weight the child's frames when predicting child arousal, and does it beat
// mean pooling?

#include <cstdint>
#include <string>
#include <vector>

#include "daf/data/synth.hpp"
#include "daf/model/config.hpp"
#include "daf/train/trainer.hpp"
#include "json.hpp"

namespace daf::cli {

// Model dimensions and clip length used for the experiment on a single CPU
// core.
model::ModelConfig experiment_model();
data::SynthConfig experiment_synth();

struct ExperimentConfig {
  data::SynthConfig synth = experiment_synth();  // 30 dyads x 40 clips, child talk 0.3
  model::ModelConfig model = experiment_model();
  train::TrainConfig train;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::size_t threads = 1;
  bool verbose = false;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::size_t fold = 0;
  double rho_mean_pool = 0.0;
  double rho_attention = 0.0;
  std::size_t clips_with_ratio = 0;  // test clips where both classes occur
  std::size_t clips_ratio_above_1 = 0;
  double mean_ratio_attention = 0.0;
  double mean_ratio_mean_pool = 0.0;
  std::size_t epochs_mean_pool = 0;
  std::size_t epochs_attention = 0;
};

struct ExperimentResult {
  std::vector<SeedOutcome> seeds;
  double mean_rho_mean_pool = 0.0;
  double mean_rho_attention = 0.0;
  std::size_t seeds_with_positive_gap = 0;
  double fraction_ratio_above_1 = 0.0;  // pooled over seeds
  double max_abs_mean_pool_ratio_dev = 0.0;
  double wall_time_s = 0.0;

  bool accuracy_criterion() const;
  bool attention_criterion() const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);
nlohmann::json experiment_to_json(const ExperimentResult& r);

}  // namespace daf::cli
