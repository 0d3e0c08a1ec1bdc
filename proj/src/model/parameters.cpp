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

#include "daf/model/parameters.hpp"

#include <cmath>
#include <map>

#include "daf/common/error.hpp"

namespace daf::model {

namespace {

template <class T>
ad::Tensor<T> uniform_tensor(ad::Shape shape, double bound, Rng& rng) {
  std::vector<T> v(ad::shape_size(shape));
  for (auto& x : v) x = static_cast<T>(uniform(rng, -bound, bound));
  return ad::Tensor<T>(std::move(shape), std::move(v));
}

template <class T>
ad::Tensor<T> filled(ad::Shape shape, T value) {
  std::vector<T> v(ad::shape_size(shape), value);
  return ad::Tensor<T>(std::move(shape), std::move(v));
}

std::string gru_prefix(std::size_t layer, std::size_t dir) {
  return "gru" + std::to_string(layer) + (dir == 0 ? ".fwd." : ".bwd.");
}

// Shapes of every tensor for `cfg`, zero-filled.
template <class T>
ParameterSet<T> shaped(const ModelConfig& cfg) {
  cfg.validate();
  const std::size_t c = cfg.conv_channels, f = cfg.cnn_feature_dim(), h = cfg.gru_hidden;
  ParameterSet<T> p;
  p.conv_kernels = ad::Tensor<T>({c, 1, cfg.conv_width});
  p.conv_bias = ad::Tensor<T>({c});
  p.bn_gamma = filled<T>({f}, T(1));
  p.bn_beta = ad::Tensor<T>({f});
  p.bn_running_mean = ad::Tensor<T>({f});
  p.bn_running_var = filled<T>({f}, T(1));
  p.gru.resize(cfg.gru_layers);
  for (std::size_t layer = 0; layer < cfg.gru_layers; ++layer) {
    const std::size_t k = layer == 0 ? f : cfg.rnn_output_dim();
    for (auto& g : p.gru[layer]) {
      g.w_input = ad::Tensor<T>({k, 3 * h});
      g.w_hidden_gates = ad::Tensor<T>({h, 2 * h});
      g.w_hidden_cand = ad::Tensor<T>({h, h});
      g.bias = ad::Tensor<T>({3 * h});
    }
  }
  if (cfg.attention_dim() > 0) p.attention_w = ad::Tensor<T>({cfg.attention_dim()});
  p.fc1_w = ad::Tensor<T>({cfg.rnn_output_dim(), cfg.fc_hidden});
  p.fc1_b = ad::Tensor<T>({cfg.fc_hidden});
  p.fc2_w = ad::Tensor<T>({cfg.fc_hidden, 1});
  p.fc2_b = ad::Tensor<T>({1});
  return p;
}

template <class Set, class Ptr>
std::vector<std::pair<std::string, Ptr>> list_params(Set& p, bool with_running) {
  std::vector<std::pair<std::string, Ptr>> out;
  out.emplace_back("conv.kernels", &p.conv_kernels);
  out.emplace_back("conv.bias", &p.conv_bias);
  out.emplace_back("bn.gamma", &p.bn_gamma);
  out.emplace_back("bn.beta", &p.bn_beta);
  if (with_running) {
    out.emplace_back("bn.running_mean", &p.bn_running_mean);
    out.emplace_back("bn.running_var", &p.bn_running_var);
  }
  for (std::size_t layer = 0; layer < p.gru.size(); ++layer) {
    for (std::size_t dir = 0; dir < 2; ++dir) {
      auto& g = p.gru[layer][dir];
      const std::string pre = gru_prefix(layer, dir);
      out.emplace_back(pre + "w_input", &g.w_input);
      out.emplace_back(pre + "w_hidden_gates", &g.w_hidden_gates);
      out.emplace_back(pre + "w_hidden_cand", &g.w_hidden_cand);
      out.emplace_back(pre + "bias", &g.bias);
    }
  }
  if (p.attention_w.size() > 0) out.emplace_back("attention.w", &p.attention_w);
  out.emplace_back("fc1.w", &p.fc1_w);
  out.emplace_back("fc1.b", &p.fc1_b);
  out.emplace_back("fc2.w", &p.fc2_w);
  out.emplace_back("fc2.b", &p.fc2_b);
  return out;
}

}  // namespace

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

template <class T>
std::vector<std::pair<std::string, ad::Tensor<T>*>> ParameterSet<T>::trainable() {
  return list_params<ParameterSet<T>, ad::Tensor<T>*>(*this, false);
}
template <class T>
std::vector<std::pair<std::string, const ad::Tensor<T>*>> ParameterSet<T>::trainable() const {
  return list_params<const ParameterSet<T>, const ad::Tensor<T>*>(*this, false);
}
template <class T>
std::vector<std::pair<std::string, ad::Tensor<T>*>> ParameterSet<T>::all() {
  return list_params<ParameterSet<T>, ad::Tensor<T>*>(*this, true);
}
template <class T>
std::vector<std::pair<std::string, const ad::Tensor<T>*>> ParameterSet<T>::all() const {
  return list_params<const ParameterSet<T>, const ad::Tensor<T>*>(*this, true);
}

template <class T>
void ParameterSet<T>::zero_grad() {
  for (auto& [name, t] : trainable()) t->zero_grad();
}

template <class T>
std::size_t ParameterSet<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : trainable()) n += t->size();
  return n;
}

template <class T>
ParameterSet<T> init_params(const ModelConfig& cfg, Rng& rng) {
  ParameterSet<T> p = shaped<T>(cfg);
  const std::size_t c = cfg.conv_channels, w = cfg.conv_width, h = cfg.gru_hidden;
  p.conv_kernels = uniform_tensor<T>({c, 1, w}, glorot_bound(w, c * w), rng);
  for (auto& layer : p.gru) {
    for (auto& g : layer) {
      const std::size_t k = g.w_input.dim(0);
      g.w_input = uniform_tensor<T>({k, 3 * h}, glorot_bound(k, h), rng);
      const double rec = 1.0 / std::sqrt(static_cast<double>(h));
      g.w_hidden_gates = uniform_tensor<T>({h, 2 * h}, rec, rng);
      g.w_hidden_cand = uniform_tensor<T>({h, h}, rec, rng);
    }
  }
  const std::size_t in = cfg.rnn_output_dim();
  p.fc1_w = uniform_tensor<T>({in, cfg.fc_hidden}, glorot_bound(in, cfg.fc_hidden), rng);
  p.fc2_w = uniform_tensor<T>({cfg.fc_hidden, 1}, glorot_bound(cfg.fc_hidden, 1), rng);
  return p;
}

template <class T>
std::vector<ad::NamedTensor> to_named(const ParameterSet<T>& params) {
  std::vector<ad::NamedTensor> out;
  for (const auto& [name, t] : params.all()) out.push_back(ad::to_named(name, *t));
  return out;
}

template <class T>
ParameterSet<T> from_named(const ModelConfig& cfg, const std::vector<ad::NamedTensor>& named) {
  ParameterSet<T> p = shaped<T>(cfg);
  std::map<std::string, const ad::NamedTensor*> by_name;
  for (const auto& nt : named) {
    if (!by_name.emplace(nt.name, &nt).second) throw InputError("duplicate weight tensor '" + nt.name + "'");
  }
  auto slots = p.all();
  if (slots.size() != named.size()) {
    throw InputError("weight file holds " + std::to_string(named.size()) + " tensors, model expects " +
                     std::to_string(slots.size()));
  }
  for (auto& [name, t] : slots) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw InputError("weight file lacks tensor '" + name + "'");
    if (it->second->shape != t->shape()) {
      throw InputError("tensor '" + name + "' has shape " + ad::shape_str(it->second->shape) + ", expected " +
                       ad::shape_str(t->shape()));
    }
    *t = ad::from_named<T>(*it->second);
  }
  return p;
}

template <class To, class From>
ParameterSet<To> convert(const ParameterSet<From>& params) {
  auto cast = [](const ad::Tensor<From>& t) {
    if (t.shape().empty()) return ad::Tensor<To>();
    std::vector<To> v(t.data().begin(), t.data().end());
    return ad::Tensor<To>(t.shape(), std::move(v));
  };
  ParameterSet<To> p;
  p.conv_kernels = cast(params.conv_kernels);
  p.conv_bias = cast(params.conv_bias);
  p.bn_gamma = cast(params.bn_gamma);
  p.bn_beta = cast(params.bn_beta);
  p.bn_running_mean = cast(params.bn_running_mean);
  p.bn_running_var = cast(params.bn_running_var);
  p.gru.resize(params.gru.size());
  for (std::size_t l = 0; l < params.gru.size(); ++l) {
    for (std::size_t d = 0; d < 2; ++d) {
      const auto& s = params.gru[l][d];
      p.gru[l][d] = {cast(s.w_input), cast(s.w_hidden_gates), cast(s.w_hidden_cand), cast(s.bias)};
    }
  }
  p.attention_w = cast(params.attention_w);
  p.fc1_w = cast(params.fc1_w);
  p.fc1_b = cast(params.fc1_b);
  p.fc2_w = cast(params.fc2_w);
  p.fc2_b = cast(params.fc2_b);
  return p;
}

template struct ParameterSet<float>;
template struct ParameterSet<double>;
template ParameterSet<float> init_params<float>(const ModelConfig&, Rng&);
template ParameterSet<double> init_params<double>(const ModelConfig&, Rng&);
template std::vector<ad::NamedTensor> to_named<float>(const ParameterSet<float>&);
template std::vector<ad::NamedTensor> to_named<double>(const ParameterSet<double>&);
template ParameterSet<float> from_named<float>(const ModelConfig&, const std::vector<ad::NamedTensor>&);
template ParameterSet<double> from_named<double>(const ModelConfig&, const std::vector<ad::NamedTensor>&);
template ParameterSet<float> convert<float, double>(const ParameterSet<double>&);
template ParameterSet<double> convert<double, float>(const ParameterSet<float>&);
template ParameterSet<float> convert<float, float>(const ParameterSet<float>&);
template ParameterSet<double> convert<double, double>(const ParameterSet<double>&);

}  // namespace daf::model
