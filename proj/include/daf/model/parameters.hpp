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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "daf/autodiff/checkpoint.hpp"
#include "daf/autodiff/tensor.hpp"
#include "daf/common/rng.hpp"
#include "daf/model/config.hpp"

namespace daf::model {

template <class T>
struct GruLayerParams {
  ad::Tensor<T> w_input;         // [K x 3H]
  ad::Tensor<T> w_hidden_gates;  // [H x 2H]
  ad::Tensor<T> w_hidden_cand;   // [H x H]
  ad::Tensor<T> bias;            // [3H]
};

template <class T>
struct ParameterSet {
  ad::Tensor<T> conv_kernels;  // [C x 1 x 8]
  ad::Tensor<T> conv_bias;     // [C]
  ad::Tensor<T> bn_gamma;      // [F]
  ad::Tensor<T> bn_beta;
  ad::Tensor<T> bn_running_mean;
  ad::Tensor<T> bn_running_var;
  // gru[layer][0] runs forward in time, gru[layer][1] backward.
  std::vector<std::array<GruLayerParams<T>, 2>> gru;
  ad::Tensor<T> attention_w;  // [K], empty for mean pooling
  ad::Tensor<T> fc1_w;        // [H' x fc_hidden]
  ad::Tensor<T> fc1_b;
  ad::Tensor<T> fc2_w;        // [fc_hidden x 1]
  ad::Tensor<T> fc2_b;

  // Learnable tensors in a fixed order, with stable checkpoint names.
  std::vector<std::pair<std::string, ad::Tensor<T>*>> trainable();
  std::vector<std::pair<std::string, const ad::Tensor<T>*>> trainable() const;
  // trainable() plus the batch-norm running statistics.
  std::vector<std::pair<std::string, ad::Tensor<T>*>> all();
  std::vector<std::pair<std::string, const ad::Tensor<T>*>> all() const;

  void zero_grad();
  std::size_t parameter_count() const;
};

// Glorot-uniform conv/FC/GRU-input blocks, recurrent blocks uniform in
// +-1/sqrt(H), zero biases, zero attention vector, identity batch norm.
template <class T>
ParameterSet<T> init_params(const ModelConfig& cfg, Rng& rng);

// Bound used for a Glorot-uniform block.
double glorot_bound(std::size_t fan_in, std::size_t fan_out);

template <class T>
std::vector<ad::NamedTensor> to_named(const ParameterSet<T>& params);
// Shapes and names are checked against a freshly shaped set for `cfg`.
template <class T>
ParameterSet<T> from_named(const ModelConfig& cfg, const std::vector<ad::NamedTensor>& named);

template <class To, class From>
ParameterSet<To> convert(const ParameterSet<From>& params);

}  // namespace daf::model
