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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "daf/autodiff/tensor.hpp"
#include "daf/model/config.hpp"
#include "daf/model/parameters.hpp"

namespace daf::train {

struct TrainConfig {
  double learning_rate = 1e-4;
  std::size_t batch_size = 20;
  std::size_t patience = 15;
  std::size_t max_epochs = 200;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
  // Also score the train set after every epoch (an extra inference pass).
  bool track_train_ccc = false;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double dev_rho = 0.0;
  double dev_ccc = 0.0;
  double train_ccc = 0.0;  // when tracked
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_dev_rho = 0.0;
  bool stopped_early = false;
  double wall_time_s = 0.0;

  std::size_t epochs_run() const { return epochs.size(); }
};

std::string train_report_to_json(const TrainReport& r);

// Tracks the best score; improvement must be strict.
class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}
  // Returns true when `score` is a new best.
  bool update(std::size_t epoch, double score);
  bool should_stop() const { return since_best_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_score() const { return best_; }

 private:
  std::size_t patience_;
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
  double best_ = -std::numeric_limits<double>::infinity();
};

struct Dataset {
  std::vector<const ad::Tensor<float>*> inputs;  // each [L x D]
  std::vector<double> labels;
  std::vector<std::string> dyad_ids;  // optional; checked for train/dev overlap

  std::size_t size() const { return inputs.size(); }
};

// Spearman rho treating an undefined value (constant predictions) as 0.
double rho_or_zero(const std::vector<double>& pred, const std::vector<double>& target);
double ccc_or_zero(const std::vector<double>& pred, const std::vector<double>& target);

// Shuffled minibatch order for one epoch. Instances are batched only with
// instances of equal length; a trailing batch of one joins its predecessor
// when one of the same length exists.
std::vector<std::vector<std::size_t>> make_batches(const Dataset& data, std::size_t batch_size, Rng& rng);

struct TrainResult {
  model::ParameterSet<float> params;  // from the best dev epoch
  TrainReport report;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainResult train_task(const model::ModelConfig& model_cfg, const Dataset& train, const Dataset& dev,
                       const TrainConfig& cfg, const EpochCallback& on_epoch = {});

}  // namespace daf::train
