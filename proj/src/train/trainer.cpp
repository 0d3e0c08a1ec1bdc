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

#include "daf/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "daf/autodiff/ops.hpp"
#include "daf/common/error.hpp"
#include "daf/model/crdnn.hpp"
#include "daf/stats/correlation.hpp"
#include "daf/train/adam.hpp"
#include "daf/train/ccc.hpp"
#include "json.hpp"

namespace daf::train {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ContractError("train config: learning rate must be positive");
  if (batch_size == 0) throw ContractError("train config: batch size must be positive");
  if (patience == 0 || max_epochs == 0) throw ContractError("train config: patience and max_epochs must be positive");
  if (patience >= max_epochs) throw ContractError("train config: patience must be below max_epochs");
  if (!(eps > 0.0 && beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw ContractError("train config: invalid Adam hyperparameters");
  }
}

std::string train_report_to_json(const TrainReport& r) {
  nlohmann::json j;
  j["best_epoch"] = r.best_epoch;
  j["best_dev_rho"] = r.best_dev_rho;
  j["stopped_early"] = r.stopped_early;
  j["epochs_run"] = r.epochs_run();
  j["wall_time_s"] = r.wall_time_s;
  j["epochs"] = nlohmann::json::array();
  for (const auto& e : r.epochs) {
    j["epochs"].push_back({{"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"dev_rho", e.dev_rho},
                           {"dev_ccc", e.dev_ccc},
                           {"train_ccc", e.train_ccc}});
  }
  return j.dump(2);
}

bool EarlyStopper::update(std::size_t epoch, double score) {
  if (score > best_) {
    best_ = score;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

double rho_or_zero(const std::vector<double>& pred, const std::vector<double>& target) {
  try {
    return stats::spearman_rho(pred, target);
  } catch (const NumericError&) {
    return 0.0;
  }
}

double ccc_or_zero(const std::vector<double>& pred, const std::vector<double>& target) {
  try {
    return ccc(pred, target);
  } catch (const NumericError&) {
    return 0.0;
  }
}

std::vector<std::vector<std::size_t>> make_batches(const Dataset& data, std::size_t batch_size, Rng& rng) {
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  // Buckets by length, in order of first appearance.
  std::vector<std::size_t> bucket_len;
  std::map<std::size_t, std::vector<std::size_t>> buckets;
  for (std::size_t i : order) {
    const std::size_t len = data.inputs[i]->dim(0);
    auto& b = buckets[len];
    if (b.empty()) bucket_len.push_back(len);
    b.push_back(i);
  }
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t len : bucket_len) {
    const auto& idx = buckets[len];
    const std::size_t first = batches.size();
    for (std::size_t s = 0; s < idx.size(); s += batch_size) {
      batches.emplace_back(idx.begin() + s, idx.begin() + std::min(idx.size(), s + batch_size));
    }
    if (batches.size() - first >= 2 && batches.back().size() == 1) {
      batches[batches.size() - 2].push_back(batches.back()[0]);
      batches.pop_back();
    }
  }
  return batches;
}

namespace {

void check_dataset(const Dataset& d, const model::ModelConfig& cfg, const char* what) {
  if (d.size() == 0) throw ContractError(std::string(what) + " set is empty");
  if (d.labels.size() != d.size()) throw ContractError(std::string(what) + " set: label count mismatch");
  if (!d.dyad_ids.empty() && d.dyad_ids.size() != d.size()) {
    throw ContractError(std::string(what) + " set: dyad id count mismatch");
  }
  for (const auto* x : d.inputs) {
    if (x->rank() != 2 || x->dim(1) != cfg.input_dim || x->dim(0) == 0) {
      throw ContractError(std::string(what) + " set: instance shape " + ad::shape_str(x->shape()) +
                          " does not fit the model");
    }
  }
  for (double v : d.labels) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + " set: non-finite label");
  }
}

std::vector<double> score(const model::ModelConfig& cfg, const model::ParameterSet<float>& params,
                          const Dataset& d, std::size_t batch) {
  const auto y = model::predict<float>(cfg, params, d.inputs, batch);
  return {y.begin(), y.end()};
}

}  // namespace

TrainResult train_task(const model::ModelConfig& model_cfg, const Dataset& train, const Dataset& dev,
                       const TrainConfig& cfg, const EpochCallback& on_epoch) {
  const auto start = std::chrono::steady_clock::now();
  model_cfg.validate();
  cfg.validate();
  check_dataset(train, model_cfg, "train");
  check_dataset(dev, model_cfg, "dev");
  if (train.size() < 2) throw ContractError("train set needs at least two instances");
  if (std::all_of(dev.labels.begin(), dev.labels.end(), [&](double v) { return v == dev.labels[0]; })) {
    throw NumericError("dev labels are constant; rank correlation undefined");
  }
  if (!train.dyad_ids.empty() && !dev.dyad_ids.empty()) {
    const std::set<std::string> train_dyads(train.dyad_ids.begin(), train.dyad_ids.end());
    for (const auto& d : dev.dyad_ids) {
      if (train_dyads.count(d)) throw ContractError("dyad '" + d + "' appears in both train and dev sets");
    }
  }

  Rng init_rng = make_stream(cfg.seed, 0);
  Rng shuffle_rng = make_stream(cfg.seed, 1);
  Rng dropout_rng = make_stream(cfg.seed, 2);

  model::ParameterSet<float> params = model::init_params<float>(model_cfg, init_rng);
  std::vector<ad::Tensor<float>*> tensors;
  for (auto& [name, t] : params.trainable()) tensors.push_back(t);
  Adam<float> adam({cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.eps}, tensors);

  TrainResult result{params, {}};
  EarlyStopper stopper(cfg.patience);
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (const auto& batch : make_batches(train, cfg.batch_size, shuffle_rng)) {
      if (batch.size() < 2) continue;  // CCC needs two samples
      std::vector<const ad::Tensor<float>*> xs;
      std::vector<double> ys;
      for (std::size_t i : batch) {
        xs.push_back(train.inputs[i]);
        ys.push_back(train.labels[i]);
      }
      params.zero_grad();
      ad::Tape<float> tape;
      const auto out = model::forward_batch<float>(tape, model_cfg, model::ParamBinding<float>::trainable(params), xs,
                                                   ad::Mode::kTrain, dropout_rng);
      ad::Var loss;
      try {
        loss = ccc_loss(tape, out.yhat, ys);
      } catch (const NumericError&) {
        continue;  // constant predictions and targets: no signal in this batch
      }
      const double value = tape.value(loss)[0];
      if (!std::isfinite(value)) throw NumericError("training loss is not finite at epoch " + std::to_string(epoch));
      tape.backward(loss);
      adam.step(tensors);
      loss_sum += value;
      ++loss_count;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
    const auto dev_pred = score(model_cfg, params, dev, cfg.batch_size);
    rec.dev_rho = rho_or_zero(dev_pred, dev.labels);
    rec.dev_ccc = ccc_or_zero(dev_pred, dev.labels);
    if (cfg.track_train_ccc) rec.train_ccc = ccc_or_zero(score(model_cfg, params, train, cfg.batch_size), train.labels);
    result.report.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (stopper.update(epoch, rec.dev_rho)) {
      result.params = params;
      result.report.best_epoch = epoch;
      result.report.best_dev_rho = rec.dev_rho;
    }
    if (stopper.should_stop() && epoch < cfg.max_epochs) {
      result.report.stopped_early = true;
      break;
    }
  }
  for (auto& [name, t] : result.params.trainable()) t->drop_grad();
  result.report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace daf::train
