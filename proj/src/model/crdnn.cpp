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

#include "daf/model/crdnn.hpp"

#include <algorithm>
#include <map>

#include "daf/common/error.hpp"

namespace daf::model {

template <class T>
ad::Var ParamBinding<T>::bind(ad::Tape<T>& tape, const ad::Tensor<T>& t) const {
  // A trainable binding views the same, non-const set it mutates.
  if (live_) return tape.parameter(const_cast<ad::Tensor<T>&>(t));
  return tape.constant_ref(t);
}

template <class T>
ad::Tensor<T> to_input(const features::FeatureMatrix& x) {
  std::vector<T> v(x.values().begin(), x.values().end());
  return ad::Tensor<T>({x.rows(), x.cols()}, std::move(v));
}

template <class T>
BatchOutputs forward_batch(ad::Tape<T>& tape, const ModelConfig& cfg, const ParamBinding<T>& binding,
                           std::span<const ad::Tensor<T>* const> inputs, ad::Mode mode, Rng& rng) {
  using namespace ad;
  if (inputs.empty()) throw ContractError("forward: empty batch");
  const ParameterSet<T>& p = binding.params();
  const std::size_t batch = inputs.size();
  const std::size_t frames = inputs[0]->rank() == 2 ? inputs[0]->dim(0) : 0;
  if (frames == 0) throw ContractError("forward: instance has no frames");
  for (const auto* in : inputs) {
    if (in->rank() != 2 || in->dim(1) != cfg.input_dim) {
      throw ContractError("forward: input shape " + shape_str(in->shape()) + ", expected [L x " +
                          std::to_string(cfg.input_dim) + "]");
    }
    if (in->dim(0) != frames) throw ContractError("forward: batch instances differ in length");
  }
  const double p_drop = cfg.dropout_p;
  const std::size_t rows = batch * frames;

  std::vector<T> stacked;
  stacked.reserve(rows * cfg.input_dim);
  for (const auto* in : inputs) stacked.insert(stacked.end(), in->data().begin(), in->data().end());
  Var x = tape.constant(Tensor<T>({rows, cfg.input_dim}, std::move(stacked)));

  Var conv = conv1d_feature_axis(tape, x, binding.bind(tape, p.conv_kernels), binding.bind(tape, p.conv_bias));
  Var pooled = relu(tape, maxpool_feature_axis(tape, conv, cfg.pool_width, cfg.pool_stride));
  Var flat = reshape(tape, pooled, {rows, cfg.cnn_feature_dim()});
  Var gamma = binding.bind(tape, p.bn_gamma);
  Var beta = binding.bind(tape, p.bn_beta);
  Var f = binding.live()
              ? batchnorm(tape, flat, gamma, beta, binding.live()->bn_running_mean, binding.live()->bn_running_var, mode)
              : batchnorm_frozen(tape, flat, gamma, beta, p.bn_running_mean, p.bn_running_var, mode);
  Var f_seq = reshape(tape, f, {batch, frames, cfg.cnn_feature_dim()});

  Var layer_in = reshape(tape, dropout(tape, f, p_drop, mode, rng), {batch, frames, cfg.cnn_feature_dim()});
  Var h;
  for (std::size_t layer = 0; layer < cfg.gru_layers; ++layer) {
    GruVars dirs[2];
    for (std::size_t d = 0; d < 2; ++d) {
      const auto& g = p.gru[layer][d];
      dirs[d] = {binding.bind(tape, g.w_input), binding.bind(tape, g.w_hidden_gates),
                 binding.bind(tape, g.w_hidden_cand), binding.bind(tape, g.bias)};
    }
    Var fwd = gru_sequence(tape, layer_in, dirs[0], false);
    Var bwd = gru_sequence(tape, layer_in, dirs[1], true);
    h = cfg.direction_merge == DirectionMerge::kSum ? add(tape, fwd, bwd) : concat_last(tape, fwd, bwd);
    layer_in = dropout(tape, h, p_drop, mode, rng);
  }

  BatchOutputs out;
  out.f = f_seq;
  out.h = h;
  Var z;
  if (cfg.attention == AttentionKind::kMeanPool) {
    z = mean_time(tape, layer_in);
  } else {
    Var src = cfg.attention == AttentionKind::kAttRnn ? layer_in : f_seq;
    out.alpha = softmax(tape, attention_logits(tape, src, binding.bind(tape, p.attention_w)));
    z = weighted_time_sum(tape, out.alpha, layer_in);
    if (cfg.dropout == DropoutPlacement::kDropAll) z = dropout(tape, z, p_drop, mode, rng);
  }
  Var hidden = relu(tape, linear(tape, z, binding.bind(tape, p.fc1_w), binding.bind(tape, p.fc1_b)));
  hidden = dropout(tape, hidden, p_drop, mode, rng);
  Var y = linear(tape, hidden, binding.bind(tape, p.fc2_w), binding.bind(tape, p.fc2_b));
  out.yhat = reshape(tape, y, {batch});
  return out;
}

template <class T>
Prediction<T> forward(const ModelConfig& cfg, const ParameterSet<T>& params, const features::FeatureMatrix& x,
                      ad::Mode mode, Rng& rng) {
  if (x.cols() != cfg.input_dim) {
    throw ContractError("forward: input has " + std::to_string(x.cols()) + " descriptors, model expects " +
                        std::to_string(cfg.input_dim));
  }
  if (x.rows() == 0) throw ContractError("forward: instance has no frames");
  const ad::Tensor<T> input = to_input<T>(x);
  const ad::Tensor<T>* inputs[] = {&input};
  ad::Tape<T> tape;
  // Train-mode batch norm on a single instance must not move the caller's
  // running statistics, so the set is always bound read-only here.
  const BatchOutputs out = forward_batch<T>(tape, cfg, ParamBinding<T>::frozen(params), inputs, mode, rng);
  Prediction<T> pred;
  pred.yhat = tape.value(out.yhat)[0];
  if (out.alpha.valid()) {
    const auto a = tape.value(out.alpha).data();
    pred.alpha.emplace(a.begin(), a.end());
  }
  const auto& f = tape.value(out.f);
  pred.f = ad::Tensor<T>({f.dim(1), f.dim(2)}, {f.data().begin(), f.data().end()});
  const auto& h = tape.value(out.h);
  pred.h = ad::Tensor<T>({h.dim(1), h.dim(2)}, {h.data().begin(), h.data().end()});
  return pred;
}

template <class T>
std::vector<T> predict(const ModelConfig& cfg, const ParameterSet<T>& params,
                       std::span<const ad::Tensor<T>* const> inputs, std::size_t batch_size) {
  if (batch_size == 0) throw ContractError("predict: batch size must be positive");
  std::vector<T> out(inputs.size());
  std::map<std::size_t, std::vector<std::size_t>> by_length;
  for (std::size_t i = 0; i < inputs.size(); ++i) by_length[inputs[i]->rank() > 0 ? inputs[i]->dim(0) : 0].push_back(i);
  Rng unused(0);
  for (const auto& [len, idx] : by_length) {
    for (std::size_t start = 0; start < idx.size(); start += batch_size) {
      const std::size_t end = std::min(idx.size(), start + batch_size);
      std::vector<const ad::Tensor<T>*> chunk;
      for (std::size_t j = start; j < end; ++j) chunk.push_back(inputs[idx[j]]);
      ad::Tape<T> tape;
      const BatchOutputs o =
          forward_batch<T>(tape, cfg, ParamBinding<T>::frozen(params), chunk, ad::Mode::kInfer, unused);
      const auto y = tape.value(o.yhat).data();
      for (std::size_t j = start; j < end; ++j) out[idx[j]] = y[j - start];
    }
  }
  return out;
}

template <class T>
std::vector<T> pool_mean(const ad::Tensor<T>& h) {
  if (h.rank() != 2 || h.dim(0) == 0) throw ContractError("pool_mean: expected a non-empty L x H matrix");
  ad::Tape<T> tape;
  ad::Var v = ad::reshape(tape, tape.constant_ref(h), {1, h.dim(0), h.dim(1)});
  const auto z = tape.value(ad::mean_time(tape, v)).data();
  return {z.begin(), z.end()};
}

template <class T>
WeightedPool<T> pool_weighted(const ad::Tensor<T>& h, const ad::Tensor<T>& scores_source, const ad::Tensor<T>& w) {
  if (h.rank() != 2 || h.dim(0) == 0) throw ContractError("pool_weighted: expected a non-empty L x H matrix");
  if (scores_source.rank() != 2 || scores_source.dim(0) != h.dim(0)) {
    throw ContractError("pool_weighted: scores source must be L x K with the same L as h");
  }
  if (w.rank() != 1 || w.dim(0) != scores_source.dim(1)) {
    throw ContractError("pool_weighted: w has shape " + ad::shape_str(w.shape()) + ", expected [" +
                        std::to_string(scores_source.dim(1)) + "]");
  }
  ad::Tape<T> tape;
  const std::size_t len = h.dim(0);
  ad::Var hv = ad::reshape(tape, tape.constant_ref(h), {1, len, h.dim(1)});
  ad::Var sv = ad::reshape(tape, tape.constant_ref(scores_source), {1, len, scores_source.dim(1)});
  ad::Var alpha = ad::softmax(tape, ad::attention_logits(tape, sv, tape.constant_ref(w)));
  ad::Var z = ad::weighted_time_sum(tape, alpha, hv);
  const auto zs = tape.value(z).data();
  const auto as = tape.value(alpha).data();
  return {{zs.begin(), zs.end()}, {as.begin(), as.end()}};
}

#define DAF_INSTANTIATE(T)                                                                                       \
  template class ParamBinding<T>;                                                                                \
  template ad::Tensor<T> to_input<T>(const features::FeatureMatrix&);                                            \
  template BatchOutputs forward_batch<T>(ad::Tape<T>&, const ModelConfig&, const ParamBinding<T>&,               \
                                         std::span<const ad::Tensor<T>* const>, ad::Mode, Rng&);                 \
  template Prediction<T> forward<T>(const ModelConfig&, const ParameterSet<T>&, const features::FeatureMatrix&, \
                                    ad::Mode, Rng&);                                                             \
  template std::vector<T> predict<T>(const ModelConfig&, const ParameterSet<T>&,                                 \
                                     std::span<const ad::Tensor<T>* const>, std::size_t);                        \
  template std::vector<T> pool_mean<T>(const ad::Tensor<T>&);                                                    \
  template WeightedPool<T> pool_weighted<T>(const ad::Tensor<T>&, const ad::Tensor<T>&, const ad::Tensor<T>&);

DAF_INSTANTIATE(float)
DAF_INSTANTIATE(double)

}  // namespace daf::model
