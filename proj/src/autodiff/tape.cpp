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

#include "daf/autodiff/tape.hpp"

#include <algorithm>

#include "daf/common/error.hpp"

namespace daf::ad {

template <class T>
const typename Tape<T>::Node& Tape<T>::node(Var v) const {
  if (v.id >= nodes_.size()) throw ContractError("tape: invalid variable handle");
  return nodes_[v.id];
}

template <class T>
Var Tape<T>::constant(Tensor<T> value) {
  nodes_.push_back(Node{std::move(value), nullptr, nullptr, false, {}});
  return Var{nodes_.size() - 1};
}

template <class T>
Var Tape<T>::variable(Tensor<T> value) {
  nodes_.push_back(Node{std::move(value), nullptr, nullptr, true, {}});
  return Var{nodes_.size() - 1};
}

template <class T>
Var Tape<T>::parameter(Tensor<T>& param) {
  nodes_.push_back(Node{Tensor<T>{}, &param, &param, true, {}});
  return Var{nodes_.size() - 1};
}

template <class T>
Var Tape<T>::constant_ref(const Tensor<T>& value) {
  nodes_.push_back(Node{Tensor<T>{}, &value, nullptr, false, {}});
  return Var{nodes_.size() - 1};
}

template <class T>
Var Tape<T>::record(Tensor<T> value, std::initializer_list<Var> inputs, BackwardFn backward) {
  const bool needs = std::any_of(inputs.begin(), inputs.end(), [this](Var v) { return node(v).requires_grad; });
  nodes_.push_back(Node{std::move(value), nullptr, nullptr, needs, {}});
  const std::size_t id = nodes_.size() - 1;
  if (needs) steps_.push_back(Step{id, std::move(backward)});
  return Var{id};
}

template <class T>
const Tensor<T>& Tape<T>::value(Var v) const {
  const Node& n = node(v);
  return n.view != nullptr ? *n.view : n.owned;
}

template <class T>
std::span<T> Tape<T>::grad(Var v) {
  node(v);
  Node& n = nodes_[v.id];
  if (n.external != nullptr) return n.external->grad();
  if (!n.requires_grad) throw ContractError("tape: gradient requested for a constant");
  if (n.grad.size() != n.owned.size()) n.grad.assign(n.owned.size(), T(0));
  return n.grad;
}

template <class T>
void Tape<T>::backward(Var loss) {
  const Tensor<T>& l = value(loss);
  if (l.size() != 1) throw ContractError("backward: loss must be a scalar, got shape " + shape_str(l.shape()));
  if (!node(loss).requires_grad) throw ContractError("backward: loss does not depend on any variable");
  for (Node& n : nodes_) {
    if (n.external != nullptr) n.external->grad();
  }
  grad(loss)[0] += T(1);
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    const Node& out = nodes_[it->output];
    // Nodes never reached from the loss keep an unallocated (zero) gradient.
    if (out.grad.empty()) continue;
    it->fn(*this, Var{it->output});
  }
}

template class Tape<float>;
template class Tape<double>;

}  // namespace daf::ad
