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

// Convolutional-recurrent network with a pooling head:
//   conv(1x8) -> maxpool(3, stride 2) -> ReLU -> batchnorm = f
//   -> dropout -> BiGRU x layers = h -> dropout -> pooling head = z
//   -> [attention dropout] -> FC -> ReLU -> dropout -> FC -> y

#include <optional>
#include <span>
#include <vector>

#include "daf/autodiff/ops.hpp"
#include "daf/autodiff/tape.hpp"
#include "daf/features/lld.hpp"
#include "daf/model/config.hpp"
#include "daf/model/parameters.hpp"

namespace daf::model {

// How parameters enter a tape: trainable (gradients accumulate into the set
// and train-mode batch norm moves its running statistics) or frozen.
template <class T>
class ParamBinding {
 public:
  static ParamBinding trainable(ParameterSet<T>& p) { return ParamBinding(&p, &p); }
  static ParamBinding frozen(const ParameterSet<T>& p) { return ParamBinding(&p, nullptr); }

  const ParameterSet<T>& params() const { return *view_; }
  ParameterSet<T>* live() const { return live_; }
  ad::Var bind(ad::Tape<T>& tape, const ad::Tensor<T>& t) const;

 private:
  ParamBinding(const ParameterSet<T>* view, ParameterSet<T>* live) : view_(view), live_(live) {}
  const ParameterSet<T>* view_;
  ParameterSet<T>* live_;
};

struct BatchOutputs {
  ad::Var yhat;   // [B]
  ad::Var alpha;  // [B x L]; invalid for mean pooling
  ad::Var f;      // [B x L x F], CNN output
  ad::Var h;      // [B x L x H'], RNN output
};

// All inputs must share L. Each input is [L x input_dim].
template <class T>
BatchOutputs forward_batch(ad::Tape<T>& tape, const ModelConfig& cfg, const ParamBinding<T>& params,
                           std::span<const ad::Tensor<T>* const> inputs, ad::Mode mode, Rng& rng);

template <class T>
ad::Tensor<T> to_input(const features::FeatureMatrix& x);

template <class T>
struct Prediction {
  T yhat{};
  std::optional<std::vector<T>> alpha;
  ad::Tensor<T> f;  // [L x F]
  ad::Tensor<T> h;  // [L x H']
};

template <class T>
Prediction<T> forward(const ModelConfig& cfg, const ParameterSet<T>& params, const features::FeatureMatrix& x,
                      ad::Mode mode, Rng& rng);

// Infer-mode predictions for many instances, batched by equal length.
template <class T>
std::vector<T> predict(const ModelConfig& cfg, const ParameterSet<T>& params,
                       std::span<const ad::Tensor<T>* const> inputs, std::size_t batch_size = 20);

// Pooling heads on a single sequence.
template <class T>
std::vector<T> pool_mean(const ad::Tensor<T>& h);
template <class T>
struct WeightedPool {
  std::vector<T> z;
  std::vector<T> alpha;
};
// alpha = softmax_t(w . scores_source_t), z = sum_t alpha_t h_t.
template <class T>
WeightedPool<T> pool_weighted(const ad::Tensor<T>& h, const ad::Tensor<T>& scores_source, const ad::Tensor<T>& w);

}  // namespace daf::model
