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

#include "daf/train/adam.hpp"

#include <cmath>

#include "daf/common/error.hpp"

namespace daf::train {

template <class T>
Adam<T>::Adam(AdamConfig cfg, std::span<ad::Tensor<T>* const> params) : cfg_(cfg) {
  if (!(cfg.learning_rate > 0.0 && cfg.eps > 0.0 && cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 &&
        cfg.beta2 < 1.0)) {
    throw ContractError("adam: invalid hyperparameters");
  }
  for (const auto* p : params) {
    m_.emplace_back(p->size(), 0.0);
    v_.emplace_back(p->size(), 0.0);
  }
}

template <class T>
void Adam<T>::step(std::span<ad::Tensor<T>* const> params) {
  if (params.size() != m_.size()) throw ContractError("adam: parameter count changed");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i]->size() != m_[i].size()) throw ContractError("adam: parameter shape changed");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    ad::Tensor<T>& p = *params[i];
    if (!p.has_grad()) continue;
    const auto g = p.grad();
    auto x = p.data();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double gj = g[j];
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * gj;
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * gj * gj;
      x[j] -= static_cast<T>(cfg_.learning_rate * (m[j] / c1) / (std::sqrt(v[j] / c2) + cfg_.eps));
    }
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace daf::train
