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

#include "daf/cli/pipeline.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "daf/common/error.hpp"
#include "daf/features/feature_io.hpp"
#include "daf/features/norm.hpp"
#include "daf/model/crdnn.hpp"
#include "daf/stats/correlation.hpp"

namespace daf::cli {

std::vector<std::size_t> Corpus::select(const std::vector<std::string>& dyads) const {
  const std::set<std::string> wanted(dyads.begin(), dyads.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (wanted.count(dyad_ids[i])) out.push_back(i);
  }
  return out;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Corpus load_corpus(const data::Manifest& manifest, stats::Attribute task, std::size_t threads) {
  Corpus c;
  c.labels = manifest.labels(task);
  for (const auto& inst : manifest.instances) {
    c.instance_ids.push_back(inst.instance_id);
    c.dyad_ids.push_back(inst.dyad_id);
  }
  c.features.resize(manifest.instances.size());
  parallel_for(c.features.size(), threads,
               [&](std::size_t i) { c.features[i] = features::read_features(manifest.instances[i].feature_path); });
  return c;
}

FoldOutcome run_fold(const Corpus& corpus, const data::Fold& fold, const model::ModelConfig& model_cfg,
                     const train::TrainConfig& train_cfg, bool keep_alpha, const train::EpochCallback& on_epoch) {
  const auto train_idx = corpus.select(fold.train);
  const auto dev_idx = corpus.select(fold.dev);
  FoldOutcome out;
  out.test_indices = corpus.select(fold.test);
  if (train_idx.empty() || dev_idx.empty() || out.test_indices.empty()) {
    throw InputError("fold has an empty train, dev or test partition");
  }

  std::vector<const features::FeatureMatrix*> train_feats;
  for (std::size_t i : train_idx) train_feats.push_back(&corpus.features[i]);
  const features::NormStats norm = features::fit_norm(std::span<const features::FeatureMatrix* const>(train_feats));

  // Normalized tensors for every instance this fold touches.
  std::vector<ad::Tensor<float>> tensors(corpus.size());
  auto prepare = [&](const std::vector<std::size_t>& idx, train::Dataset& ds) {
    for (std::size_t i : idx) {
      tensors[i] = model::to_input<float>(features::apply_norm(corpus.features[i], norm));
      ds.inputs.push_back(&tensors[i]);
      ds.labels.push_back(corpus.labels[i]);
      ds.dyad_ids.push_back(corpus.dyad_ids[i]);
    }
  };
  train::Dataset train_set, dev_set, test_set;
  prepare(train_idx, train_set);
  prepare(dev_idx, dev_set);
  prepare(out.test_indices, test_set);

  auto result = train::train_task(model_cfg, train_set, dev_set, train_cfg, on_epoch);
  out.report = result.report;

  const auto pred = model::predict<float>(model_cfg, result.params, test_set.inputs, train_cfg.batch_size);
  out.test_predictions.assign(pred.begin(), pred.end());
  out.test_rho = train::rho_or_zero(out.test_predictions, test_set.labels);
  if (keep_alpha && model_cfg.attention != model::AttentionKind::kMeanPool) {
    Rng unused(0);
    for (std::size_t i : out.test_indices) {
      const auto p = model::forward<float>(model_cfg, result.params, features::apply_norm(corpus.features[i], norm),
                                           ad::Mode::kInfer, unused);
      out.test_alpha.emplace_back(p.alpha->begin(), p.alpha->end());
    }
  }
  out.checkpoint = {model_cfg, train_cfg.seed, norm, std::move(result.params)};
  return out;
}

}  // namespace daf::cli
