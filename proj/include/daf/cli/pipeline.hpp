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

// Cross-validation plumbing shared by train-eval and the synthetic
// experiment: per-fold normalization, training and test scoring.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "daf/data/manifest.hpp"
#include "daf/data/split.hpp"
#include "daf/features/lld.hpp"
#include "daf/model/checkpoint.hpp"
#include "daf/train/trainer.hpp"

namespace daf::cli {

struct Corpus {
  std::vector<std::string> instance_ids;
  std::vector<std::string> dyad_ids;
  std::vector<features::FeatureMatrix> features;
  std::vector<double> labels;

  std::size_t size() const { return instance_ids.size(); }
  // Instance indices whose dyad is listed, in corpus order.
  std::vector<std::size_t> select(const std::vector<std::string>& dyads) const;
};

// Reads every feature file; labels come from `task`.
Corpus load_corpus(const data::Manifest& manifest, stats::Attribute task, std::size_t threads = 1);

struct FoldOutcome {
  model::ModelCheckpoint checkpoint;
  train::TrainReport report;
  std::vector<std::size_t> test_indices;
  std::vector<double> test_predictions;
  double test_rho = 0.0;
  // Per test instance, when the head is weighted.
  std::vector<std::vector<double>> test_alpha;
};

FoldOutcome run_fold(const Corpus& corpus, const data::Fold& fold, const model::ModelConfig& model_cfg,
                     const train::TrainConfig& train_cfg, bool keep_alpha = false,
                     const train::EpochCallback& on_epoch = {});

// Runs `fn(i)` for i in [0, n) on up to `threads` workers. The first
// exception thrown by any job is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace daf::cli
